#include "fraclab/modulus.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fraclab {

namespace {

// log(e/t) for t <= 1, frozen at 1 beyond.
double log_e_over(double t) { return t >= 1.0 ? 1.0 : 1.0 - std::log(t); }

// int_{t0}^{t1} r^{e-1} dr.
double power_span(double e, double t0, double t1) {
    const double lr = std::log(t0 / t1);
    if (e == 0.0) return -lr;
    return -std::pow(t1, e) * std::expm1(e * lr) / e;
}

// int_{u1}^{u0} u^{-p} du.
double log_span(double p, double u1, double u0) {
    if (p == 1.0) return std::log(u0 / u1);
    const double q = 1.0 - p;
    return (std::pow(u0, q) - std::pow(u1, q)) / q;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidModulus(what);
}

}  // namespace

ModulusFunction ModulusFunction::power(double alpha) {
    require(alpha >= 0.0 && std::isfinite(alpha), "power modulus needs alpha >= 0");
    ModulusFunction m;
    m.kind_ = ModulusKind::power;
    m.a_ = alpha;
    return m;
}

ModulusFunction ModulusFunction::power_log(double a, double p) {
    require(a >= 0.0 && p >= 0.0 && std::isfinite(a) && std::isfinite(p), "power_log needs a, p >= 0");
    ModulusFunction m;
    m.kind_ = ModulusKind::power_log;
    m.a_ = a;
    m.p_ = p;
    return m;
}

ModulusFunction ModulusFunction::log_inverse(double p) {
    require(p > 0.0 && std::isfinite(p), "log_inverse needs p > 0");
    ModulusFunction m;
    m.kind_ = ModulusKind::log_inverse;
    m.p_ = p;
    return m;
}

ModulusFunction ModulusFunction::table(std::vector<std::pair<double, double>> points) {
    require(!points.empty(), "table modulus needs at least one point");
    require(points.front().first == 0.0, "table modulus must start at t = 0");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [t, v] = points[i];
        require(std::isfinite(t) && std::isfinite(v) && v >= 0.0, "table values must be finite and nonnegative");
        if (i > 0) {
            require(t > points[i - 1].first, "table breakpoints must be strictly increasing");
            require(v >= points[i - 1].second, "table values must be nondecreasing");
        }
    }
    ModulusFunction m;
    m.kind_ = ModulusKind::table;
    m.table_ = std::move(points);
    return m;
}

ModulusFunction ModulusFunction::composite(double scalar, ModulusFunction inner) {
    require(scalar >= 0.0 && std::isfinite(scalar), "composite scalar must be >= 0");
    ModulusFunction m;
    m.kind_ = ModulusKind::composite;
    m.a_ = scalar;
    m.inner_ = std::make_shared<const ModulusFunction>(std::move(inner));
    return m;
}

ModulusFunction ModulusFunction::times_power(double a, ModulusFunction inner) {
    require(a >= 0.0 && std::isfinite(a), "times_power exponent must be >= 0");
    ModulusFunction m;
    m.kind_ = ModulusKind::times_power;
    m.a_ = a;
    m.inner_ = std::make_shared<const ModulusFunction>(std::move(inner));
    return m;
}

ModulusFunction ModulusFunction::raised(ModulusFunction inner, double q) {
    require(q > 0.0 && std::isfinite(q), "raised exponent must be > 0");
    ModulusFunction m;
    m.kind_ = ModulusKind::raised;
    m.p_ = q;
    m.inner_ = std::make_shared<const ModulusFunction>(std::move(inner));
    return m;
}

ModulusFunction ModulusFunction::custom(std::string name, std::function<double(double)> f) {
    require(static_cast<bool>(f), "custom modulus needs a callable");
    ModulusFunction m;
    m.kind_ = ModulusKind::custom;
    m.fn_ = std::make_shared<const std::function<double(double)>>(std::move(f));
    m.name_ = std::move(name);
    m.validate_samples();
    return m;
}

ModulusFunction ModulusFunction::zero() { return table({{0.0, 0.0}}); }

ZeroBehavior ModulusFunction::zero_behavior() const {
    switch (kind_) {
        case ModulusKind::power: return a_ > 0.0 ? ZeroBehavior::exact : ZeroBehavior::nonzero;
        case ModulusKind::power_log:
            if (a_ > 0.0) return ZeroBehavior::exact;
            return p_ > 0.0 ? ZeroBehavior::limit : ZeroBehavior::nonzero;
        case ModulusKind::log_inverse: return ZeroBehavior::limit;
        case ModulusKind::table: return table_.front().second == 0.0 ? ZeroBehavior::exact : ZeroBehavior::nonzero;
        case ModulusKind::composite: return a_ == 0.0 ? ZeroBehavior::exact : inner_->zero_behavior();
        case ModulusKind::times_power: return a_ > 0.0 ? ZeroBehavior::exact : inner_->zero_behavior();
        case ModulusKind::raised: return inner_->zero_behavior();
        case ModulusKind::custom: return (*fn_)(0.0) == 0.0 ? ZeroBehavior::exact : ZeroBehavior::nonzero;
    }
    return ZeroBehavior::nonzero;
}

void ModulusFunction::require_modulus(const std::string& context) const {
    if (zero_behavior() == ZeroBehavior::nonzero)
        throw InvalidModulus(context + ": " + describe() + " does not vanish at 0");
}

std::string ModulusFunction::describe() const {
    std::ostringstream os;
    os.precision(6);
    switch (kind_) {
        case ModulusKind::power: os << "power(alpha=" << a_ << ")"; break;
        case ModulusKind::power_log: os << "power_log(a=" << a_ << ",p=" << p_ << ")"; break;
        case ModulusKind::log_inverse: os << "log_inverse(p=" << p_ << ")"; break;
        case ModulusKind::table: os << "table(" << table_.size() << " points)"; break;
        case ModulusKind::composite: os << a_ << "*" << inner_->describe(); break;
        case ModulusKind::times_power: os << "t^" << a_ << "*" << inner_->describe(); break;
        case ModulusKind::raised: os << "(" << inner_->describe() << ")^" << p_; break;
        case ModulusKind::custom: os << "custom(" << name_ << ")"; break;
    }
    return os.str();
}

double ModulusFunction::eval(double t) const {
    if (!(t >= 0.0)) throw InvalidInput("modulus evaluated at negative or NaN argument");
    switch (kind_) {
        case ModulusKind::power:
            if (t == 0.0) return a_ > 0.0 ? 0.0 : 1.0;
            return std::pow(t, a_);
        case ModulusKind::power_log:
            if (t == 0.0) return (a_ > 0.0 || p_ > 0.0) ? 0.0 : 1.0;
            return std::pow(t, a_) * std::pow(log_e_over(t), -p_);
        case ModulusKind::log_inverse:
            if (t == 0.0) return 0.0;
            return std::pow(log_e_over(t), -p_);
        case ModulusKind::table: {
            const auto& tb = table_;
            if (t >= tb.back().first) return tb.back().second;
            auto it = std::upper_bound(tb.begin(), tb.end(), t,
                                       [](double x, const std::pair<double, double>& p) { return x < p.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = (t - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
        }
        case ModulusKind::composite: return a_ == 0.0 ? 0.0 : a_ * inner_->eval(t);
        case ModulusKind::times_power:
            if (t == 0.0) return a_ > 0.0 ? 0.0 : inner_->eval(0.0);
            return std::pow(t, a_) * inner_->eval(t);
        case ModulusKind::raised: return std::pow(inner_->eval(t), p_);
        case ModulusKind::custom: return (*fn_)(t);
    }
    return 0.0;
}

double ModulusFunction::eval_log(double u) const {
    if (!(u >= 1.0)) throw InvalidInput("eval_log requires u >= 1");
    switch (kind_) {
        case ModulusKind::power: return std::exp(a_ * (1.0 - u));
        case ModulusKind::power_log: return std::exp(a_ * (1.0 - u)) * std::pow(u, -p_);
        case ModulusKind::log_inverse: return std::pow(u, -p_);
        case ModulusKind::table: return eval(std::exp(1.0 - u));
        case ModulusKind::composite: return a_ == 0.0 ? 0.0 : a_ * inner_->eval_log(u);
        case ModulusKind::times_power: {
            const double f = std::exp(a_ * (1.0 - u));
            return f == 0.0 ? 0.0 : f * inner_->eval_log(u);
        }
        case ModulusKind::raised: return std::pow(inner_->eval_log(u), p_);
        case ModulusKind::custom: return (*fn_)(std::exp(1.0 - u));
    }
    return 0.0;
}

std::optional<double> ModulusFunction::closed_impl(double s, double t0, double t1) const {
    switch (kind_) {
        case ModulusKind::power: return power_span(a_ - s, t0, t1);
        case ModulusKind::power_log:
            if (p_ == 0.0) return power_span(a_ - s, t0, t1);
            if (a_ == s) return log_span(p_, log_e_over(t1), log_e_over(t0));
            return std::nullopt;
        case ModulusKind::log_inverse:
            if (s == 0.0) return log_span(p_, log_e_over(t1), log_e_over(t0));
            return std::nullopt;
        case ModulusKind::table: {
            double total = 0.0;
            const auto& tb = table_;
            for (std::size_t i = 0; i < tb.size(); ++i) {
                const double lo = std::max(t0, tb[i].first);
                const double hi = i + 1 < tb.size() ? std::min(t1, tb[i + 1].first) : t1;
                if (!(hi > lo)) continue;
                const double slope =
                    i + 1 < tb.size() ? (tb[i + 1].second - tb[i].second) / (tb[i + 1].first - tb[i].first) : 0.0;
                const double offset = tb[i].second - slope * tb[i].first;
                if (offset != 0.0) total += offset * power_span(-s, lo, hi);
                if (slope != 0.0) total += slope * power_span(1.0 - s, lo, hi);
            }
            return total;
        }
        case ModulusKind::composite: {
            if (a_ == 0.0) return 0.0;
            auto v = inner_->closed_impl(s, t0, t1);
            if (!v) return std::nullopt;
            return a_ * *v;
        }
        case ModulusKind::times_power: return inner_->closed_impl(s - a_, t0, t1);
        case ModulusKind::raised:
            if (inner_->kind_ == ModulusKind::power) return power_span(inner_->a_ * p_ - s, t0, t1);
            return std::nullopt;
        case ModulusKind::custom: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> ModulusFunction::weighted_integral_closed(double s, double t0, double t1) const {
    if (!(s >= 0.0 && s < 1.0)) throw InvalidInput("weight exponent must lie in [0, 1)");
    if (!(t0 > 0.0 && t0 <= t1 && t1 <= 1.0)) return std::nullopt;
    if (t0 == t1) return 0.0;
    return closed_impl(s, t0, t1);
}

std::vector<double> ModulusFunction::kinks() const {
    std::vector<double> out;
    if (kind_ == ModulusKind::table) {
        for (const auto& [t, v] : table_)
            if (t > 0.0 && t <= 1.0) out.push_back(t);
    } else if (inner_) {
        out = inner_->kinks();
    }
    return out;
}

void ModulusFunction::validate_samples() const {
    std::vector<double> grid{0.0};
    constexpr int n = 400;
    for (int i = 0; i <= n; ++i) grid.push_back(8.0 * std::pow(10.0, -14.0 * (n - i) / n));
    for (double k : kinks()) grid.push_back(k);
    std::sort(grid.begin(), grid.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : grid) {
        const double v = eval(t);
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidModulus(describe() + " is not finite and nonnegative at t=" + std::to_string(t));
        if (v < prev - 1e-14 * std::abs(prev))
            throw InvalidModulus(describe() + " decreases near t=" + std::to_string(t));
        prev = std::max(prev, v);
    }
}

EvaluationReport weighted_integral(const ModulusFunction& omega, double s, double t0, double t1,
                                   const QuadratureSpec& spec) {
    if (!(t0 > 0.0 && t0 <= t1 && t1 <= 1.0)) throw InvalidInput("weighted_integral requires 0 < t0 <= t1 <= 1");
    if (auto v = omega.weighted_integral_closed(s, t0, t1))
        return {*v, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(*v), 0, true};
    const double u1 = 1.0 - std::log(t1);
    const double u0 = 1.0 - std::log(t0);
    if (!(u0 > u1)) return {};
    std::vector<double> breaks;
    for (double k : omega.kinks()) breaks.push_back(1.0 - std::log(k));
    auto f = [&](double u) { return omega.eval_log(u) * std::exp(s * (u - 1.0)); };
    return integrate_1d(f, u1, u0, spec, breaks);
}

}  // namespace fraclab
