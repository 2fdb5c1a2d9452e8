#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "fraclab/error.hpp"
#include "fraclab/point.hpp"

namespace fraclab {

/// Tolerances and budgets for every adaptive integration in the library.
struct QuadratureSpec {
    double rel_tol = 1e-7;
    double abs_tol = 1e-10;
    int max_subdivisions = 20000;
    /// Exponent s of the (rho^2 - 1)^{-s} boundary weight.
    double singular_exponent = 0.5;
    /// Near-patch radius as a multiple of the boundary distance 1 - |x|.
    double split_factor = 16.0;

    void validate() const;

    /// Tolerances for an integral nested inside another one.
    QuadratureSpec nested() const;
    QuadratureSpec tightened(double factor) const;

    double target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

/// A computed scalar with its certified error estimate and work counters.
struct EvaluationReport {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t function_evals = 0;
    bool converged = true;

    EvaluationReport& operator+=(const EvaluationReport& other) {
        value += other.value;
        error_estimate += other.error_estimate;
        function_evals += other.function_evals;
        converged = converged && other.converged;
        return *this;
    }
    friend EvaluationReport operator+(EvaluationReport a, const EvaluationReport& b) { return a += b; }

    EvaluationReport scaled(double k) const {
        return {k * value, std::abs(k) * error_estimate, function_evals, converged};
    }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

// Gauss-Kronrod 10/21 abscissae and weights (QUADPACK dqk21).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Sample {
    double value = 0.0;
    double error = 0.0;
    std::int64_t evals = 1;
    bool converged = true;
};

template <class F>
Sample sample(F& f, double x) {
    using R = std::invoke_result_t<F&, double>;
    if constexpr (std::is_same_v<std::decay_t<R>, EvaluationReport>) {
        const EvaluationReport r = f(x);
        return {r.value, r.error_estimate, r.function_evals, r.converged};
    } else {
        return {static_cast<double>(f(x)), 0.0, 1, true};
    }
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    std::int64_t evals = 0;
    bool converged = true;
    bool frozen = false;
};

template <class F>
Panel gauss_kronrod21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Panel p{a, b};
    double resk = 0.0;
    double resg = 0.0;
    double inner_err = 0.0;
    auto take = [&](const Sample& smp, double wk, double wg) {
        resk += wk * smp.value;
        resg += wg * smp.value;
        inner_err += wk * smp.error;
        p.evals += smp.evals;
        p.converged = p.converged && smp.converged;
    };
    take(sample(f, center), kWgk[10], 0.0);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double wg = (j % 2 == 1) ? kWg[j / 2] : 0.0;
        // Mirrored nodes are evaluated in a fixed order so that the rule is
        // bit-for-bit symmetric about the panel center.
        const Sample lo = sample(f, center - dx);
        const Sample hi = sample(f, center + dx);
        take(lo, kWgk[j], wg);
        take(hi, kWgk[j], wg);
    }
    p.value = resk * half;
    const double diff = std::abs((resk - resg) * half);
    const double inner = std::abs(half) * inner_err;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(p.value);
    p.error = diff + inner + roundoff;
    if (!std::isfinite(p.value) || !std::isfinite(p.error)) {
        p.value = std::isfinite(p.value) ? p.value : 0.0;
        p.error = std::numeric_limits<double>::infinity();
    }
    return p;
}

std::vector<double> sorted_breaks(double a, double b, std::span<const double> breaks);

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 10/21 integration of f over [a, b].
///
/// f may return a double or an EvaluationReport (for nested integrals); the
/// inner error estimates are propagated with the Kronrod weights. Optional
/// breakpoints seed the initial partition. When the subdivision budget runs
/// out the partial value is returned with converged = false.
template <class F>
EvaluationReport integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec,
                              std::span<const double> breaks = {}) {
    if (!(a < b)) {
        if (a == b) return {};
        throw InvalidInput("integrate_1d: requires a < b");
    }
    const std::vector<double> nodes = detail::sorted_breaks(a, b, breaks);
    std::vector<detail::Panel> heap;
    heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + nodes.size());
    std::vector<detail::Panel> frozen;
    auto by_error = [](const detail::Panel& l, const detail::Panel& r) { return l.error < r.error; };

    std::int64_t evals = 0;
    double total_value = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        detail::Panel p = detail::gauss_kronrod21(f, nodes[i], nodes[i + 1]);
        evals += p.evals;
        total_value += p.value;
        total_error += p.error;
        heap.push_back(p);
    }
    std::make_heap(heap.begin(), heap.end(), by_error);

    std::size_t panel_count = heap.size();
    while (!heap.empty() && total_error > spec.target(total_value) &&
           panel_count < static_cast<std::size_t>(spec.max_subdivisions)) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        detail::Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            worst.frozen = true;
            frozen.push_back(worst);
            continue;
        }
        detail::Panel left = detail::gauss_kronrod21(f, worst.a, mid);
        detail::Panel right = detail::gauss_kronrod21(f, mid, worst.b);
        evals += left.evals + right.evals;
        total_value += (left.value + right.value) - worst.value;
        total_error += (left.error + right.error) - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        ++panel_count;
    }

    heap.insert(heap.end(), frozen.begin(), frozen.end());
    std::sort(heap.begin(), heap.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    CompensatedSum value;
    CompensatedSum error;
    bool inner_ok = true;
    for (const auto& p : heap) {
        value.add(p.value);
        error.add(p.error);
        inner_ok = inner_ok && p.converged;
    }
    EvaluationReport out;
    out.value = value.value();
    out.error_estimate = error.value();
    out.function_evals = evals;
    out.converged = inner_ok && out.error_estimate <= spec.target(out.value);
    return out;
}

/// A radius together with its offset from a singular endpoint, computed
/// without cancellation (excess = |rho - endpoint|).
struct Radius {
    double rho = 0.0;
    double excess = 0.0;
};

enum class SingularEnd { lower, upper };

/// Integrates f over the radii rho = anchor +- e (sign by side) with the
/// offset e in [e_lo, e_hi], where f carries a factor e^{-s}. The substitution
/// e = w^{1/(1-s)} cancels that factor against its Jacobian exactly. e_breaks
/// are offsets at which f varies strongly.
EvaluationReport integrate_singular_anchor(const std::function<EvaluationReport(Radius)>& f, double anchor,
                                           double e_lo, double e_hi, double s, SingularEnd side,
                                           const QuadratureSpec& spec, std::span<const double> e_breaks = {});

/// Integrates f(rho) = (rho - 1)^{-s} h(rho) over (1, R).
EvaluationReport integrate_radial_singular(const std::function<double(Radius)>& f, double s, double R,
                                           const QuadratureSpec& spec);

/// Integrates f over [R, inf) given |f(rho)| <= M rho^{-1-decay}. The map
/// rho = R v^{-1/decay} turns the declared decay into a bounded integrand on
/// (0, 1], so no truncation remainder arises.
EvaluationReport integrate_radial_unbounded(const std::function<double(double)>& f, double R,
                                            double decay_exponent, const QuadratureSpec& spec);
EvaluationReport integrate_radial_unbounded_nested(const std::function<EvaluationReport(double)>& f, double R,
                                                   double decay_exponent, const QuadratureSpec& spec);

/// A point in the exterior of the unit ball with |y|^2 - 1 computed without
/// cancellation.
struct ExteriorPoint {
    Point y{};
    double norm_sq_minus_one = 0.0;
};

/// Integrand over the exterior of the unit ball with its declared structure.
struct ExteriorIntegrand {
    std::function<double(const ExteriorPoint&)> f;
    /// Radial integrand rho^{d-1} F decays like rho^{-1-decay_exponent}.
    double decay_exponent = 1.0;
    /// Radii |y| across which F is not smooth.
    std::vector<double> radial_breaks;
    /// F vanishes for |y| > support_radius.
    double support_radius = std::numeric_limits<double>::infinity();
    /// F depends only on |y| and the angle between y and the kernel axis
    /// (d = 3 then skips the azimuthal integration).
    bool axisymmetric = false;
};

/// Integrates F over the exterior of the unit ball in d = 1, 2, 3 dimensions.
///
/// F carries the singular weight (|y|^2 - 1)^{-s} near the sphere. Points
/// within split_factor * (1 - |x_eval|) of the boundary point closest to
/// x_eval are integrated in local polar coordinates about that point; the rest
/// in spherical coordinates. The last angular variable is folded (f(a) +
/// f(-a)) so that node placement is exactly symmetric under the mirror of the
/// frame's last tangent direction (y2 for x_eval on the e1 axis).
EvaluationReport integrate_exterior_ball(const ExteriorIntegrand& F, int d, const Point& x_eval, double s,
                                         const QuadratureSpec& spec);

/// Integrates F over the exterior of the unit ball minus B_t(z), where z is a
/// unit vector and x_eval = lambda z with 0 <= lambda < 1 (the kernel peaks
/// at z). With t = 0 this is integrate_exterior_ball.
EvaluationReport integrate_exterior_outside(const ExteriorIntegrand& F, int d, const Point& x_eval, const Point& z,
                                            double t, double s, const QuadratureSpec& spec);

/// Integrates f over the unit sphere S^{d-1} (surface measure), d = 1, 2, 3.
/// For d = 1 this is f(+1) + f(-1).
EvaluationReport integrate_sphere(const std::function<EvaluationReport(const Point&)>& f, int d,
                                  const QuadratureSpec& spec);

/// Surface area of S^{d-1}.
double sphere_area(int d);

}  // namespace fraclab
