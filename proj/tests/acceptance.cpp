// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fraclab/ball_poisson.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/moduli.hpp"
#include "fraclab/stable_operator.hpp"

using namespace fraclab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool passed = false;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.passed) ++failures;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), sec);
    std::fflush(stdout);
}

std::vector<double> decades(int first, int last) {
    std::vector<double> t;
    for (int k = first; k <= last; ++k) t.push_back(1.0 - std::pow(10.0, -k));
    return t;
}

// t = 1 - 10^{-k}, k = 0, 0.5, ..., 4.
std::vector<double> half_decades() {
    std::vector<double> t;
    for (int i = 0; i <= 8; ++i) t.push_back(1.0 - std::pow(10.0, -0.5 * i));
    return t;
}

Point axis(double t) { return {t, 0.0, 0.0}; }

Outcome normalization() {
    const auto t0 = std::chrono::steady_clock::now();
    QuadratureSpec q;
    double worst = 0.0;
    bool converged = true;
    for (int d = 1; d <= 3; ++d)
        for (double s : {0.25, 0.5, 0.75})
            for (int k = 1; k <= 4; ++k) {
                const double delta = std::pow(10.0, -k);
                const PoissonKernel kern = PoissonKernel::make(d, s);
                const Point x = axis(1.0 - delta);
                const double a = delta * (2.0 - delta);
                ExteriorIntegrand F;
                F.decay_exponent = 2.0 * s;
                // The kernel at a point of the e1 axis depends on |y| and y1 only.
                F.axisymmetric = true;
                F.f = [&](const ExteriorPoint& p) {
                    return kern.c_ds * std::pow(a / p.norm_sq_minus_one, s) * std::pow(distance(x, p.y), -d);
                };
                const EvaluationReport r = integrate_exterior_ball(F, d, x, s, q);
                converged = converged && r.converged;
                worst = std::max(worst, std::abs(r.value - 1.0));
            }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-6 && converged && sec < 120.0,
            fmt::format("36 cases, max |mass - 1| = {:.2e}, {:.1f} s of 120 s", worst, sec)};
}

Outcome explicit_lower_bound() {
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    int violations = 0;
    double tightest = INFINITY;
    for (double s : {0.3, 0.5, 0.7}) {
        const ExteriorDatum g = datum_prop42(ModulusFunction::power(s));
        const BallProblem p = BallProblem::make(g, s);
        for (double t : decades(1, 3)) {
            const EvaluationReport u = solve(p, axis(t), q);
            const double lhs = u.value - g(unit(0)) - u.error_estimate;
            // int_{1-t}^1 r^s r^{-1-s} dr = ln(1/(1-t)).
            const double rhs = kPi / 8.0 * s * (1.0 - s) * std::pow(1.0 - t, s) * std::log(1.0 / (1.0 - t));
            if (!(lhs >= rhs) || !u.converged) ++violations;
            tightest = std::min(tightest, lhs / rhs);
        }
    }
    return {violations == 0, fmt::format("{} violations of 9, smallest lhs/rhs {:.3f}", violations, tightest)};
}

Outcome ratio_floor() {
    const double s = 0.5;
    QuadratureSpec q;
    const ExteriorDatum g = datum_thm15(ModulusFunction::power(0.5), 2);
    const BallProblem p = BallProblem::make(g, s);
    std::vector<Point> xs;
    for (double t : half_decades())
        if (t > 0.0) xs.push_back(axis(t));  // at t = 0 the bracket vanishes
    const std::vector<SolutionRow> rows = solve_many(p, xs, q);
    double lo = INFINITY, hi = 0.0;
    bool positive = true;
    for (const SolutionRow& r : rows) {
        const double gap = 1.0 - r.x[0];
        const double den = std::pow(gap, s) * std::log(1.0 / gap);
        const double diff = r.report.value - g(unit(0));
        positive = positive && diff - r.report.error_estimate > 0.0 && r.report.converged;
        lo = std::min(lo, diff / den);
        hi = std::max(hi, diff / den);
    }
    return {positive && hi / lo < 10.0,
            fmt::format("{} points, ratio in [{:.4f}, {:.4f}], max/min {:.3f}", rows.size(), lo, hi, hi / lo)};
}

Outcome blowup() {
    const double s = 0.5;
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    const std::vector<double> ts = decades(1, 4);
    auto quotient = [&](const ModulusFunction& iota, std::vector<double>& err) {
        const ExteriorDatum g = datum_cex14(iota, s, 1);
        const BallProblem p = BallProblem::make(g, s);
        std::vector<double> qs;
        err.clear();
        for (double t : ts) {
            const EvaluationReport u = solve(p, axis(t), q);
            const double scale = std::pow(1.0 - t, -s);
            qs.push_back(std::abs(u.value - g(unit(0))) * scale);
            err.push_back(u.error_estimate * scale);
        }
        return qs;
    };
    std::vector<double> e1, e2;
    const ModulusFunction iota1 = ModulusFunction::log_inverse(1.0);
    const std::vector<double> q1 = quotient(iota1, e1);
    bool increasing = true;
    for (std::size_t k = 1; k < q1.size(); ++k) increasing = increasing && q1[k] - e1[k] > q1[k - 1] + e1[k - 1];
    // Growth against P(t) = int_{1-t}^1 iota(r)/r dr: q(k) >= q(1)/2 * P(k)/P(1),
    // with a positive least-squares slope of q on P.
    const ModulusFunction omega1 = ModulusFunction::times_power(s, iota1);
    std::vector<double> P;
    for (double t : ts) P.push_back(weighted_integral(omega1, s, 1.0 - t, 1.0, q).value);
    bool grows = true;
    for (std::size_t k = 0; k < q1.size(); ++k) grows = grows && q1[k] - e1[k] >= 0.5 * (q1[0] - e1[0]) * P[k] / P[0];
    double mp = 0.0, mq = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        mp += P[k] / P.size();
        mq += q1[k] / P.size();
    }
    double cov = 0.0, var = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        cov += (P[k] - mp) * (q1[k] - mq);
        var += (P[k] - mp) * (P[k] - mp);
    }
    const double slope = cov / var;

    const std::vector<double> q2 = quotient(ModulusFunction::log_inverse(2.0), e2);
    const auto [mn, mx] = std::minmax_element(q2.begin(), q2.end());
    const bool bounded = *mn > 0.0 && *mx / *mn <= 3.0;
    return {increasing && grows && slope > 0.0 && bounded,
            fmt::format("log^-1: q = {:.4f} {:.4f} {:.4f} {:.4f}, slope on P {:.3f}; log^-2: max/min {:.3f}", q1[0],
                        q1[1], q1[2], q1[3], slope, *mx / *mn)};
}

Outcome cancellation() {
    QuadratureSpec q;
    const BallProblem p = BallProblem::make(datum_ex43(0.5, 2), 0.5);
    std::vector<Point> xs;
    for (double t : half_decades()) xs.push_back(axis(t));
    double worst = 0.0;
    for (const SolutionRow& r : solve_many(p, xs, q)) worst = std::max(worst, std::abs(r.report.value));
    return {worst <= 1e-8, fmt::format("{} points, max |u| = {:.2e}", xs.size(), worst)};
}

Outcome dini() {
    const DiniResult a = dini_integral(ModulusFunction::log_inverse(2.0));
    const DiniResult z = dini_integral(ModulusFunction::zero());
    const DiniResult b = dini_integral(ModulusFunction::log_inverse(1.0));
    const bool ok = a.convergent() && std::abs(a.value - 1.0) <= 1e-3 && z.convergent() && z.value == 0.0 &&
                    !b.convergent();
    return {ok, fmt::format("log^-2 -> {:.6f}, zero -> {}, log^-1 -> {}", a.value, z.value,
                            b.convergent() ? "convergent" : "divergent")};
}

Outcome sigma_closed_forms() {
    double worst = 0.0;
    bool exact_zero = true;
    for (double s : {0.25, 0.5, 0.75})
        for (double t : {1e-1, 1e-3}) {
            const double ref = std::pow(t, s) * (1.0 + std::log(1.0 / t));
            worst = std::max(worst, std::abs(sigma(ModulusFunction::power(s), s, t).value / ref - 1.0));
            exact_zero = exact_zero && sigma(ModulusFunction::zero(), s, t).value == std::pow(t, s);
        }
    return {worst <= 1e-6 && exact_zero, fmt::format("max relative error {:.2e}; omega = 0 exact: {}", worst,
                                                     exact_zero ? "yes" : "no")};
}

Outcome lemma_suite() {
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double tol = 1e-10;

    // Pairwise embedding: for |x - y| <= r, |du| / iota(|x - y|) <= |du| / (kappa(r) |x - y|^s)
    // with iota(t) = t^s kappa(t).
    int v1 = 0;
    const std::vector<ModulusFunction> pool = {ModulusFunction::power(0.3), ModulusFunction::power(0.9),
                                               ModulusFunction::log_inverse(1.0), ModulusFunction::power_log(0.5, 1.0)};
    auto field = [](const Point& p) { return std::sin(3.0 * p[0]) + p[1] * p[1]; };
    for (int i = 0; i < 10000; ++i) {
        const ModulusFunction w = i % 5 == 4 ? random_table_modulus(rng) : pool[i % 4];
        const double s = 0.1 + 0.8 * U(rng);
        const Point x{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0, 0.0};
        const Point y{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0, 0.0};
        const double rho = distance(x, y);
        if (rho == 0.0) continue;
        const double r = rho + 2.0 * U(rng);
        const double du = std::abs(field(x) - field(y));
        const double kr = kappa(w, s, rho, tol);
        const double lhs = du / (std::pow(rho, s) * kr);
        const double rhs = du / (kappa(w, s, r, tol) * std::pow(rho, s));
        if (lhs > rhs * (1.0 + 10.0 * tol) + 1e-300) ++v1;
    }

    // sigma(a t) <= a sigma(t), a >= 1.
    int v2 = 0;
    for (int i = 0; i < 10000; ++i) {
        const ModulusFunction w = i % 2 ? random_table_modulus(rng) : pool[i % 4];
        const double s = 0.1 + 0.8 * U(rng);
        const double t = std::pow(10.0, -6.0 * U(rng)) * 2.0;
        const double a = 1.0 + 99.0 * U(rng);
        const EvaluationReport at = sigma(w, s, a * t, tol);
        const EvaluationReport st = sigma(w, s, t, tol);
        if (at.value - at.error_estimate > a * (st.value + st.error_estimate)) ++v2;
    }

    // omega(t) <= max(2 omega(2), 2) sigma(t) on random tables.
    int v3 = 0;
    for (int m = 0; m < 200; ++m) {
        const ModulusFunction w = random_table_modulus(rng);
        const double s = 0.1 + 0.8 * U(rng);
        const double c = std::max(2.0 * w(2.0), 2.0);
        for (int i = 0; i < 50; ++i) {
            const double t = 2.0 * U(rng) + 1e-9;
            const EvaluationReport st = sigma(w, s, t, tol);
            if (w(t) > c * (st.value + st.error_estimate)) ++v3;
        }
    }
    return {v1 + v2 + v3 == 0, fmt::format("violations: embedding {} / 1e4, scaling {} / 1e4, domination {} / 1e4",
                                           v1, v2, v3)};
}

Outcome operator_cross_validation() {
    QuadratureSpec q;
    q.rel_tol = 1e-7;
    const double s = 0.5;
    const BallProblem p = BallProblem::make(datum_prop42(ModulusFunction::power(s)), s);
    const HarmonicityResult h = harmonicity_residual(p, axis(0.0), 1.0, q);
    const bool harmonic = h.converged && std::abs(h.residual) <= 1e-3 * h.tail_scale;

    double worst_ref = 0.0, worst_exact = 0.0;
    for (double sb : {0.25, 0.5, 0.75})
        for (double x : {0.0, 0.5}) {
            OperatorSpec op;
            op.measure = SpectralMeasure::fractional_laplacian(1, sb);
            op.s = sb;
            const EvaluationReport a = apply_operator(op, barrier_function(sb), axis(x));
            OperatorSpec fine = op;
            fine.quadrature = op.quadrature.tightened(10.0);
            for (double& e : fine.pv_inner_radii) e /= 10.0;
            const EvaluationReport ref = apply_operator(fine, barrier_function(sb), axis(x));
            worst_ref = std::max(worst_ref, std::abs(a.value / ref.value - 1.0));
            worst_exact = std::max(worst_exact, std::abs(a.value / barrier_value(1, sb) - 1.0));
        }
    return {harmonic && worst_ref <= 1e-3 && worst_exact <= 1e-3,
            fmt::format("residual {:.2e} vs tail {:.4f}; barrier vs 10x reference {:.2e}, vs closed form {:.2e}",
                        h.residual, h.tail_scale, worst_ref, worst_exact)};
}

Outcome stieltjes() {
    QuadratureSpec q;
    std::string detail;
    bool ok = true;
    struct Case {
        const char* name;
        BallProblem problem;
        double t_max;  // the profile is constant beyond this distance
    };
    const ModulusFunction w = ModulusFunction::power(0.5);
    const std::vector<Case> cases = {{"prop42", BallProblem::make(datum_prop42(w), 0.5), 2.0},
                                     {"thm15", BallProblem::make(datum_thm15(w, 2), 0.5), 5.5}};
    for (const Case& c : cases)
        for (double t : {0.9, 0.99}) {
            const InteriorBoundaryResult r = interior_to_boundary_check(c.problem, axis(t), unit(0), c.t_max, q);
            ok = ok && r.holds;
            detail += fmt::format("{}{}{} x={}: lhs {:.4f} <= rhs {:.4f}, slack {:.4f}", detail.empty() ? "" : "; ", c.name,
                                  r.closed_form_profile ? "" : "(sampled)", t, r.lhs + r.lhs_error, r.rhs_lower,
                                  r.slack);
        }
    return {ok, detail};
}

Outcome geometry() {
    const Paraboloid P{ModulusFunction::power(1.0), 0.5};
    int violations = 0;
    std::size_t points = 0;
    for (int d = 2; d <= 3; ++d) {
        const DomainOracle ball = DomainOracle::ball(d, 32);
        for (std::size_t i = 0; i < ball.frames().size(); ++i) {
            ++points;
            if (!check_exterior_dini(ball, ball.frames()[i].z, P, 10000, 100 + i).holds_on_samples) ++violations;
        }
    }
    const DomainOracle cusp = DomainOracle::cusp(2);
    const ExteriorDiniCheck c = check_exterior_dini(cusp, {0.0, 0.0, 0.0}, P, 10000, 1);
    const bool witness = c.witness.has_value() && cusp.inside(*c.witness);
    return {violations == 0 && witness,
            fmt::format("ball: {} violations at {} boundary points (d = 2, 3); cusp witness {}", violations, points,
                        witness ? fmt::format("({:.3g}, {:.3g})", (*c.witness)[0], (*c.witness)[1]) : "missing")};
}

}  // namespace

int main() {
    run(1, "kernel normalization", normalization);
    run(2, "explicit lower bound, d = 1", explicit_lower_bound);
    run(3, "ratio floor, d = 2", ratio_floor);
    run(4, "blow-up for a non-Dini modulus", blowup);
    run(5, "cancellation for the odd datum", cancellation);
    run(6, "Dini integrals", dini);
    run(7, "sigma closed forms", sigma_closed_forms);
    run(8, "embedding, scaling and domination properties", lemma_suite);
    run(9, "operator cross-validation", operator_cross_validation);
    run(10, "interior to boundary Stieltjes estimate", stieltjes);
    run(11, "exterior paraboloid geometry", geometry);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
