#include "fraclab/ball_poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - |x|^2 without cancellation near the sphere.
double one_minus_sq(const Point& x) {
    const double r = norm(x);
    return (1.0 - r) * (1.0 + r);
}

bool on_e1_axis(const Point& x) { return x[1] == 0.0 && x[2] == 0.0; }

// x = lambda z with 0 <= lambda < 1 exactly enough for the annular integrator.
bool on_segment(const Point& x, const Point& z) {
    if (std::abs(norm(z) - 1.0) > 1e-12) return false;
    const double lambda = dot(x, z);
    return lambda >= 0.0 && lambda < 1.0 && distance(x, lambda * z) <= 1e-12;
}

ExteriorIntegrand kernel_integrand(const PoissonKernel& k, const Point& x) {
    const double a = one_minus_sq(x);
    ExteriorIntegrand F;
    F.decay_exponent = 2.0 * k.s;
    F.f = [k, x, a](const ExteriorPoint& p) {
        return k.c_ds * std::pow(a / p.norm_sq_minus_one, k.s) * std::pow(distance(x, p.y), -k.d);
    };
    return F;
}

}  // namespace

PoissonKernel PoissonKernel::make(int d, double s) {
    if (d < 1 || d > kMaxDim) throw DimensionError("Poisson kernel supports d = 1, 2, 3");
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
    return {d, s, std::tgamma(0.5 * d) * std::sin(kPi * s) / std::pow(kPi, 0.5 * d + 1.0)};
}

double poisson_kernel_eval(const PoissonKernel& k, const Point& x, const Point& y) {
    if (!(norm(x) < 1.0)) throw DomainError("Poisson kernel needs |x| < 1");
    const double ry = norm(y);
    if (!(ry > 1.0)) throw DomainError("Poisson kernel needs |y| > 1");
    const double ey = (ry - 1.0) * (ry + 1.0);
    return k.c_ds * std::pow(one_minus_sq(x) / ey, k.s) * std::pow(distance(x, y), -k.d);
}

BallProblem BallProblem::make(const ExteriorDatum& g, double s) {
    BallProblem p{PoissonKernel::make(g.dim, s), g};
    p.validate();
    return p;
}

void BallProblem::validate() const {
    if (!datum.eval) throw InvalidInput("datum has no evaluator");
    if (datum.dim != kernel.d) throw DimensionError("datum and kernel dimensions differ");
    if (!std::isfinite(datum.support_radius) && !(datum.growth_exponent < 2.0 * kernel.s))
        throw InvalidInput("datum must grow slower than |y|^{2s}");
}

EvaluationReport solve(const BallProblem& problem, const Point& x, const QuadratureSpec& spec) {
    problem.validate();
    if (!(norm(x) < 1.0)) throw DomainError("solve needs |x| < 1");
    const ExteriorDatum& g = problem.datum;
    ExteriorIntegrand F = kernel_integrand(problem.kernel, x);
    F.f = [kf = F.f, eval = g.eval](const ExteriorPoint& p) {
        const double gy = eval(p.y);
        return gy == 0.0 ? 0.0 : kf(p) * gy;
    };
    F.decay_exponent = 2.0 * problem.kernel.s - std::max(0.0, g.growth_exponent);
    F.radial_breaks = g.radial_breaks;
    F.support_radius = g.support_radius;
    F.axisymmetric = g.axisymmetric_e1 && on_e1_axis(x);
    return integrate_exterior_ball(F, problem.kernel.d, x, problem.kernel.s, spec);
}

EvaluationReport solve_vt(const PoissonKernel& kernel, const Point& z, double t, const Point& x,
                          const QuadratureSpec& spec) {
    if (!(t >= 0.0)) throw InvalidInput("v_t needs t >= 0");
    if (!(norm(x) < 1.0)) throw DomainError("v_t needs |x| < 1");
    if (!(norm(z) >= 1.0 - 1e-12)) throw DomainError("v_t needs a base point outside the open ball");
    ExteriorIntegrand F = kernel_integrand(kernel, x);
    F.axisymmetric = true;
    if (on_segment(x, z)) return integrate_exterior_outside(F, kernel.d, x, z, t, kernel.s, spec);
    F.axisymmetric = false;
    F.f = [kf = F.f, z, t](const ExteriorPoint& p) { return distance(p.y, z) < t ? 0.0 : kf(p); };
    return integrate_exterior_ball(F, kernel.d, x, kernel.s, spec);
}

InteriorBoundaryResult interior_to_boundary_check(const BallProblem& problem, const Point& x, const Point& z,
                                                  double t_max, const QuadratureSpec& spec,
                                                  const InteriorBoundaryOptions& options) {
    problem.validate();
    if (!(t_max > 0.0)) throw InvalidInput("t_max must be positive");
    if (!(options.relative_tol > 0.0)) throw InvalidInput("relative_tol must be positive");
    const ExteriorDatum& g = problem.datum;
    const EvaluationReport u = solve(problem, x, spec);
    InteriorBoundaryResult res;
    res.lhs = std::abs(u.value - g(z));
    res.lhs_error = u.error_estimate;

    std::vector<double> grid;
    for (int i = 1; i <= options.profile_radii; ++i) grid.push_back(t_max * i / options.profile_radii);
    const OscillationProfile xi = oscillation_profile(g, z, grid, options.profile_directions);
    res.closed_form_profile = xi.is_closed_form();

    StieltjesOptions so;
    so.tol = std::max(options.relative_tol * xi(t_max), 1e-14);
    so.max_points = options.max_points;
    // Jumps of a sampled profile are where the bracket is widest.
    for (double t : xi.jump_points())
        if (t > 0.0 && t < t_max && so.initial_points.size() < 256) so.initial_points.push_back(t);
    const QuadratureSpec inner = spec.nested();
    auto v = [&](double t) { return solve_vt(problem.kernel, z, t, x, inner); };
    const StieltjesResult st = stieltjes_integral(v, [&](double t) { return xi(t); }, t_max, so);
    res.rhs = st.report.value;
    res.rhs_lower = st.lower;
    res.rhs_upper = st.upper;
    res.stieltjes_points = st.history.empty() ? 0 : st.history.back().points;
    res.slack = res.rhs_lower - (res.lhs + res.lhs_error);
    res.holds = res.slack >= 0.0;
    return res;
}

FieldFunction solution_field(const BallProblem& problem, const QuadratureSpec& spec) {
    problem.validate();
    FieldFunction u;
    u.eval = [problem, spec](const Point& y) {
        if (norm(y) < 1.0) return solve(problem, y, spec);
        return EvaluationReport{problem.datum(y), 0.0, 1, true};
    };
    u.growth_exponent = std::max(0.0, problem.datum.growth_exponent);
    u.sphere_breaks = problem.datum.radial_breaks;
    u.sphere_breaks.push_back(1.0);
    u.support_radius = std::max(1.0, problem.datum.support_radius);
    return u;
}

HarmonicityResult harmonicity_residual(const BallProblem& problem, const Point& x, double calibration,
                                       const QuadratureSpec& spec) {
    if (!(calibration > 0.0)) throw InvalidInput("calibration must be positive");
    if (!(norm(x) < 1.0)) throw DomainError("harmonicity check needs |x| < 1");
    OperatorSpec op;
    op.measure = SpectralMeasure::fractional_laplacian(problem.kernel.d, problem.kernel.s);
    op.s = problem.kernel.s;
    op.quadrature = spec;
    const FieldFunction u = solution_field(problem, spec.tightened(100.0));
    const EvaluationReport a = apply_operator(op, u, x);
    const EvaluationReport tl = tail(op, u, x);
    return {a.value / calibration, a.error_estimate / calibration, tl.value, a.converged && tl.converged};
}

double harmonicity_check(const BallProblem& problem, const Point& x, double calibration, const QuadratureSpec& spec) {
    return harmonicity_residual(problem, x, calibration, spec).residual;
}

std::vector<SolutionRow> solve_many(const BallProblem& problem, const std::vector<Point>& xs,
                                    const QuadratureSpec& spec, Execution mode) {
    std::vector<SolutionRow> rows(xs.size());
    for_each_index(
        xs.size(), [&](std::size_t i) { rows[i] = {xs[i], solve(problem, xs[i], spec)}; }, mode);
    return rows;
}

void write_solution_csv(std::ostream& out, const std::vector<SolutionRow>& rows, int d) {
    for (int i = 0; i < d; ++i) out << 'x' << (i + 1) << ',';
    out << "value,error_estimate,function_evals\n";
    for (const SolutionRow& r : rows) {
        for (int i = 0; i < d; ++i) out << fmt::format("{:.17g},", r.x[i]);
        out << fmt::format("{:.17g},{:.6e},{}\n", r.report.value, r.report.error_estimate, r.report.function_evals);
    }
}

}  // namespace fraclab
