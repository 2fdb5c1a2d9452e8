#include "fraclab/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclab/error.hpp"

namespace fraclab {

// ---------------------------------------------------------------- Dini integral

std::vector<double> default_dini_cutoffs(int depth) {
    if (depth < 5) throw InvalidInput("Dini test needs at least 5 cutoffs");
    std::vector<double> u;
    for (int k = 1; k <= depth; ++k) u.push_back(std::ldexp(1.0, k));
    return u;
}

std::vector<double> decimal_dini_cutoffs(int depth) {
    if (depth < 5) throw InvalidInput("Dini test needs at least 5 cutoffs");
    std::vector<double> u;
    for (int k = 1; k <= depth; ++k) u.push_back(1.0 + k * std::numbers::ln10);
    return u;
}

std::vector<double> log_cutoffs_from_deltas(const std::vector<double>& deltas) {
    std::vector<double> u;
    for (double d : deltas) {
        if (!(d > 0.0 && d < 1.0)) throw InvalidInput("Dini cutoffs must lie in (0, 1)");
        u.push_back(1.0 - std::log(d));
    }
    return u;
}

DiniResult dini_integral(const ModulusFunction& iota, const std::vector<double>& log_cutoffs, double tol) {
    if (log_cutoffs.size() < 5) throw InvalidInput("Dini test needs at least 5 cutoffs");
    if (!(tol > 0.0)) throw InvalidInput("Dini tolerance must be positive");
    for (std::size_t k = 0; k < log_cutoffs.size(); ++k) {
        const double lower = k == 0 ? 1.0 : log_cutoffs[k - 1];
        if (!(log_cutoffs[k] > lower) || !std::isfinite(log_cutoffs[k]))
            throw InvalidInput("Dini cutoffs must decrease strictly inside (0, 1)");
    }

    // iota(t) nondecreasing in t means nonincreasing in u = log(e/t).
    double prev = iota.eval_log(1.0);
    if (!std::isfinite(prev) || prev < 0.0) throw InvalidModulus(iota.describe() + " is not finite at t = 1");
    double u_prev = 1.0;
    for (double u_k : log_cutoffs) {
        constexpr int n = 64;
        for (int i = 1; i <= n; ++i) {
            const double u = u_prev + (u_k - u_prev) * i / n;
            const double v = iota.eval_log(u);
            if (!std::isfinite(v) || v < 0.0) throw InvalidModulus(iota.describe() + " is not finite on (0, 1]");
            if (v > prev * (1.0 + 1e-14) + 1e-300)
                throw InvalidModulus(iota.describe() + " is not nondecreasing (violation at t = e^{1-" +
                                     std::to_string(u) + "})");
            prev = v;
        }
        u_prev = u_k;
    }

    DiniResult res;
    res.log_cutoffs = log_cutoffs;
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = tol / static_cast<double>(log_cutoffs.size());
    double quad_err = 0.0;
    double running = 0.0;
    u_prev = 1.0;
    std::vector<double> breaks;
    for (double k : iota.kinks()) breaks.push_back(1.0 - std::log(k));
    for (double u_k : log_cutoffs) {
        const EvaluationReport r = integrate_1d([&](double u) { return iota.eval_log(u); }, u_prev, u_k, spec, breaks);
        res.quadrature_converged = res.quadrature_converged && r.converged;
        quad_err += r.error_estimate;
        res.increments.push_back(r.value);
        running += r.value;
        res.partials.push_back(running);
        u_prev = u_k;
    }
    for (std::size_t k = 1; k < res.increments.size(); ++k) {
        const double a = res.increments[k - 1];
        const double b = res.increments[k];
        if (b == 0.0)
            res.ratios.push_back(0.0);
        else if (a == 0.0)
            res.ratios.push_back(std::numeric_limits<double>::infinity());
        else
            res.ratios.push_back(b / a);
    }

    const std::size_t m = res.ratios.size();
    bool geometric = true;
    for (std::size_t k = m - 4; k < m; ++k) geometric = geometric && res.ratios[k] < 0.9;
    res.decision = geometric ? DiniDecision::convergent : DiniDecision::divergent;
    if (geometric) {
        const double last = res.increments.back();
        auto tail = [last](double r) { return last * r / (1.0 - r); };
        const double t_now = tail(res.ratios[m - 1]);
        res.value = res.partials.back() + t_now;
        res.error_estimate = quad_err + std::abs(t_now - tail(res.ratios[m - 2]));
    }
    return res;
}

// ---------------------------------------------------------------- sigma, kappa

namespace {

EvaluationReport kappa_integral(const ModulusFunction& omega, double s, double t, double tol) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
    if (!(t > 0.0)) throw InvalidInput("sigma and kappa need t > 0");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
    omega.require_modulus("sigma");
    if (t >= 1.0) return {0.0, 0.0, 0, true};
    QuadratureSpec spec;
    spec.rel_tol = std::numeric_limits<double>::epsilon();
    spec.abs_tol = tol;
    const EvaluationReport r = weighted_integral(omega, s, t, 1.0, spec);
    if (!r.converged || !(r.error_estimate <= tol))
        throw BudgetExceeded("integral of omega(r)/r^{1+s} did not reach tolerance", r.value, r.error_estimate);
    return r;
}

}  // namespace

EvaluationReport sigma(const ModulusFunction& omega, double s, double t, double tol) {
    const double ts = std::pow(t, s);
    const EvaluationReport r = kappa_integral(omega, s, t, t < 1.0 ? tol / ts : tol);
    return {ts * (1.0 + r.value), ts * r.error_estimate, r.function_evals, true};
}

double kappa(const ModulusFunction& omega, double s, double t, double tol) {
    return 1.0 + kappa_integral(omega, s, t, tol).value;
}

// ---------------------------------------------------------------- oscillation

OscillationProfile OscillationProfile::closed_form(Point z, std::function<double(double)> xi) {
    if (!xi) throw InvalidInput("closed-form oscillation profile is empty");
    OscillationProfile p;
    p.z_ = z;
    p.closed_ = std::move(xi);
    return p;
}

OscillationProfile OscillationProfile::sampled(Point z, std::vector<double> distances, std::vector<double> values) {
    if (distances.size() != values.size()) throw InvalidInput("oscillation samples: size mismatch");
    std::vector<std::size_t> order(distances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
    OscillationProfile p;
    p.z_ = z;
    p.sample_count_ = distances.size();
    double running = 0.0;
    for (std::size_t i : order) {
        if (!(distances[i] >= 0.0) || !std::isfinite(values[i])) throw InvalidInput("oscillation samples must be finite");
        const double v = std::abs(values[i]);
        if (v > running) {
            running = v;
            if (!p.dist_.empty() && p.dist_.back() == distances[i])
                p.value_.back() = running;
            else {
                p.dist_.push_back(distances[i]);
                p.value_.push_back(running);
            }
        }
    }
    return p;
}

double OscillationProfile::operator()(double t) const {
    if (closed_) return closed_(t);
    auto it = std::upper_bound(dist_.begin(), dist_.end(), t);
    if (it == dist_.begin()) return 0.0;
    return value_[static_cast<std::size_t>(it - dist_.begin()) - 1];
}

namespace {

std::vector<Point> sphere_directions(int d, int n) {
    std::vector<Point> out;
    if (d == 1) return {unit(0), -1.0 * unit(0)};
    if (d == 2) {
        for (int i = 0; i < n; ++i) {
            const double phi = 2.0 * std::numbers::pi * i / n;
            out.push_back({std::cos(phi), std::sin(phi), 0.0});
        }
        return out;
    }
    // Fibonacci lattice.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    return out;
}

}  // namespace

OscillationProfile oscillation_profile(const ExteriorDatum& g, const Point& z, const std::vector<double>& t_grid,
                                       int sphere_samples) {
    if (!(norm(z) >= 1.0 - 1e-12)) throw DomainError("oscillation base point must lie outside the open unit ball");
    if (g.closed_form_oscillation && (!g.oscillation_base || distance(*g.oscillation_base, z) == 0.0))
        return OscillationProfile::closed_form(z, g.closed_form_oscillation);
    if (sphere_samples < 1) throw InvalidInput("sphere_samples must be positive");
    const double gz = g(z);
    std::vector<double> dist{0.0};
    std::vector<double> val{0.0};
    constexpr int fractions = 8;
    for (const Point& th : sphere_directions(g.dim, sphere_samples)) {
        for (double t : t_grid) {
            if (!(t > 0.0)) continue;
            for (int j = 1; j <= fractions; ++j) {
                const double r = t * j / fractions;
                const Point w = z + r * th;
                if (norm(w) < 1.0) continue;
                dist.push_back(distance(z, w));
                val.push_back(g(w) - gz);
            }
        }
    }
    return OscillationProfile::sampled(z, std::move(dist), std::move(val));
}

// ---------------------------------------------------------------- Stieltjes

namespace {

struct StieltjesNode {
    double t;
    double value;
    double error;
    double xi;
};

struct Sums {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> width;  // per interval i (between node i-1 and i), index 0 unused
};

Sums darboux(const std::vector<StieltjesNode>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> hi(n), lo(n);
    double run = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        run = std::min(run, nodes[i].value + nodes[i].error);
        hi[i] = run;
    }
    run = -std::numeric_limits<double>::infinity();
    for (std::size_t k = n; k-- > 0;) {
        run = std::max(run, nodes[k].value - nodes[k].error);
        lo[k] = run;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (lo[i] > hi[i] * (1.0 + 1e-12) + 1e-14)
            throw InvalidInput("Stieltjes integrand is not nonincreasing near t = " + std::to_string(nodes[i].t));
    Sums s;
    s.width.assign(n, 0.0);
    CompensatedSum up, down;
    up.add(hi[0] * nodes[0].xi);
    down.add(lo[0] * nodes[0].xi);
    for (std::size_t i = 1; i < n; ++i) {
        const double dxi = nodes[i].xi - nodes[i - 1].xi;
        up.add(hi[i - 1] * dxi);
        down.add(lo[i] * dxi);
        s.width[i] = (hi[i - 1] - lo[i]) * dxi;
    }
    s.upper = up.value();
    s.lower = down.value();
    return s;
}

}  // namespace

StieltjesResult stieltjes_integral(const std::function<EvaluationReport(double)>& f,
                                   const std::function<double(double)>& xi, double t_max,
                                   const StieltjesOptions& options) {
    if (!(t_max > 0.0)) throw InvalidInput("Stieltjes integral needs t_max > 0");
    if (!(options.tol > 0.0)) throw InvalidInput("Stieltjes tolerance must be positive");
    std::vector<double> ts{0.0, t_max};
    for (std::size_t i = 1; i < options.initial_uniform; ++i)
        ts.push_back(t_max * static_cast<double>(i) / static_cast<double>(options.initial_uniform));
    for (double t : options.initial_points)
        if (t > 0.0 && t < t_max) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::int64_t evals = 0;
    auto make_nodes = [&](const std::vector<double>& where) {
        std::vector<StieltjesNode> out(where.size());
        std::vector<EvaluationReport> reps(where.size());
        for_each_index(where.size(), [&](std::size_t i) { reps[i] = f(where[i]); });
        for (std::size_t i = 0; i < where.size(); ++i) {
            const double x = xi(where[i]);
            if (!std::isfinite(x) || !std::isfinite(reps[i].value))
                throw InvalidInput("Stieltjes integrand or integrator not finite");
            out[i] = {where[i], reps[i].value, std::abs(reps[i].error_estimate), x};
            evals += std::max<std::int64_t>(1, reps[i].function_evals);
        }
        return out;
    };

    std::vector<StieltjesNode> nodes = make_nodes(ts);
    StieltjesResult res;
    std::vector<bool> stuck;
    while (true) {
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (nodes[i].xi < nodes[i - 1].xi)
                throw InvalidInput("Stieltjes integrator is not nondecreasing near t = " + std::to_string(nodes[i].t));
            const double slack = nodes[i].error + nodes[i - 1].error + 1e-12 * std::abs(nodes[i - 1].value) + 1e-15;
            if (nodes[i].value > nodes[i - 1].value + slack)
                throw InvalidInput("Stieltjes integrand is not nonincreasing near t = " + std::to_string(nodes[i].t));
        }
        const Sums s = darboux(nodes);
        res.history.push_back({s.lower, s.upper, nodes.size()});
        res.lower = s.lower;
        res.upper = s.upper;
        const double gap = s.upper - s.lower;
        if (gap <= options.tol || nodes.size() >= options.max_points) break;

        // Split the widest intervals: every interval above its equal share of
        // the tolerance, at most 64 per round.
        std::vector<std::size_t> cand;
        const double share = options.tol / static_cast<double>(nodes.size());
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const double mid = 0.5 * (nodes[i - 1].t + nodes[i].t);
            if (s.width[i] > share && mid > nodes[i - 1].t && mid < nodes[i].t) cand.push_back(i);
        }
        if (cand.empty()) break;
        std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return s.width[a] > s.width[b]; });
        const std::size_t room = options.max_points - nodes.size();
        cand.resize(std::min({cand.size(), std::size_t{64}, room}));
        std::vector<double> mids;
        for (std::size_t i : cand) mids.push_back(0.5 * (nodes[i - 1].t + nodes[i].t));
        std::vector<StieltjesNode> fresh = make_nodes(mids);
        nodes.insert(nodes.end(), fresh.begin(), fresh.end());
        std::sort(nodes.begin(), nodes.end(), [](const StieltjesNode& a, const StieltjesNode& b) { return a.t < b.t; });
    }
    res.report.value = 0.5 * (res.lower + res.upper);
    res.report.error_estimate = 0.5 * (res.upper - res.lower);
    res.report.function_evals = evals;
    res.report.converged = res.upper - res.lower <= options.tol;
    return res;
}

// ---------------------------------------------------------------- seminorms

namespace {

Point random_direction(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    if (d == 1) return {std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0, 0.0, 0.0};
    while (true) {
        Point p{0.0, 0.0, 0.0};
        for (int i = 0; i < d; ++i) p[i] = normal(rng);
        const double r = norm(p);
        if (r > 1e-12) return (1.0 / r) * p;
    }
}

struct PairBest {
    double ratio = 0.0;
    std::size_t index = 0;
};

HoelderEstimate reduce_pairs(const std::vector<std::pair<Point, Point>>& pairs, const std::vector<double>& ratios,
                             const ModulusFunction& omega) {
    HoelderEstimate est;
    est.modulus = omega.describe();
    est.pair_count = pairs.size();
    PairBest best{-1.0, 0};
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] > best.ratio) best = {ratios[i], i};
    if (best.ratio < 0.0) return est;
    est.seminorm = best.ratio;
    est.max_a = pairs[best.index].first;
    est.max_b = pairs[best.index].second;
    return est;
}

double pair_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

HoelderEstimate seminorm_ext(const ExteriorDatum& g, const ModulusFunction& omega, std::size_t sample_pairs,
                             std::uint64_t seed, Execution mode) {
    if (!g.eval) throw InvalidInput("datum has no evaluator");
    const int d = g.dim;
    if (d < 1 || d > kMaxDim) throw DimensionError("seminorm_ext supports d = 1, 2, 3");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r_far = std::isfinite(g.support_radius) ? g.support_radius + 0.5 : 8.0;
    auto exterior_point = [&]() {
        const double rho = unif(rng) < 0.5 ? 1.0 + std::pow(10.0, -6.0 * unif(rng)) : 1.0 + (r_far - 1.0) * unif(rng);
        return rho * random_direction(rng, d);
    };
    auto push_out = [](Point p) {
        const double r = norm(p);
        return r < 1.0 ? (1.0 / r) * p : p;
    };
    const Point anchor = g.oscillation_base ? *g.oscillation_base : unit(0);

    std::vector<std::pair<Point, Point>> pairs(sample_pairs);
    for (std::size_t i = 0; i < sample_pairs; ++i) {
        switch (i % 3) {
            case 0: pairs[i] = {exterior_point(), exterior_point()}; break;
            case 1: {
                const Point y = exterior_point();
                const double h = std::pow(10.0, -6.0 * unif(rng));
                pairs[i] = {y, push_out(y + h * random_direction(rng, d))};
                break;
            }
            default: {
                const double h = std::pow(10.0, -6.0 * unif(rng)) * (r_far - 1.0);
                pairs[i] = {anchor, push_out(anchor + h * random_direction(rng, d))};
                break;
            }
        }
    }
    std::vector<double> ratios(sample_pairs);
    for_each_index(
        sample_pairs,
        [&](std::size_t i) {
            const auto& [y, z] = pairs[i];
            const double num = std::abs(g(y) - g(z));
            const double arg = distance(y, z) + (norm(y) - 1.0) + (norm(z) - 1.0);
            ratios[i] = pair_ratio(num, omega(std::max(0.0, arg)));
        },
        mode);
    return reduce_pairs(pairs, ratios, omega);
}

HoelderEstimate seminorm_interior(const std::function<double(const Point&)>& u, const BallRegion& region,
                                  const ModulusFunction& omega, std::size_t sample_pairs, std::uint64_t seed,
                                  Execution mode) {
    const int d = region.dim;
    if (d < 1 || d > kMaxDim) throw DimensionError("seminorm_interior supports d = 1, 2, 3");
    if (!(region.radius > 0.0)) throw InvalidInput("region radius must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto ball_point = [&]() {
        const double r = region.radius * std::pow(unif(rng), 1.0 / d);
        return region.center + r * random_direction(rng, d);
    };
    auto pull_in = [&](Point p) {
        const Point off = p - region.center;
        const double r = norm(off);
        return r > region.radius ? region.center + (region.radius / r) * off : p;
    };
    std::vector<std::pair<Point, Point>> pairs(sample_pairs);
    for (std::size_t i = 0; i < sample_pairs; ++i) {
        switch (i % 3) {
            case 0: pairs[i] = {ball_point(), ball_point()}; break;
            case 1: {
                const Point x = ball_point();
                const double h = region.radius * std::pow(10.0, -6.0 * unif(rng));
                pairs[i] = {x, pull_in(x + h * random_direction(rng, d))};
                break;
            }
            default: pairs[i] = {region.center, ball_point()}; break;
        }
    }
    std::vector<double> ratios(sample_pairs);
    for_each_index(
        sample_pairs,
        [&](std::size_t i) {
            const auto& [x, y] = pairs[i];
            ratios[i] = pair_ratio(std::abs(u(x) - u(y)), omega(distance(x, y)));
        },
        mode);
    return reduce_pairs(pairs, ratios, omega);
}

ModulusFunction random_table_modulus(std::mt19937_64& rng, int max_points) {
    if (max_points < 2) throw InvalidInput("random table modulus needs at least 2 points");
    std::uniform_int_distribution<int> count(2, max_points);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> rise(1.0);
    const int n = count(rng);
    std::vector<double> ts;
    for (int i = 1; i < n; ++i) ts.push_back(2.0 * unif(rng));
    ts.push_back(2.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    double v = 0.0;
    for (double t : ts) {
        if (!(t > pts.back().first)) continue;
        if (unif(rng) > 0.2) v += rise(rng);
        pts.emplace_back(t, v);
    }
    return ModulusFunction::table(std::move(pts));
}

}  // namespace fraclab
