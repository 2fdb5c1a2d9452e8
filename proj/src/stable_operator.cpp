#include "fraclab/stable_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
}

void check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw DimensionError("dimension must be 1, 2 or 3");
}

}  // namespace

// ---------------------------------------------------------------- measure

SpectralMeasure SpectralMeasure::uniform(int d, double mass, std::optional<double> mass_bound) {
    check_dim(d);
    if (!(mass > 0.0 && std::isfinite(mass))) throw InvalidInput("uniform measure needs a positive finite mass");
    SpectralMeasure m;
    m.d_ = d;
    m.uniform_ = true;
    m.mass_ = mass;
    m.bound_ = mass_bound.value_or(mass);
    if (m.mass_ > m.bound_ * (1.0 + 1e-12)) throw InvalidInput("measure mass exceeds its declared bound");
    return m;
}

SpectralMeasure SpectralMeasure::atomic(int d, std::vector<Atom> atoms, std::optional<double> mass_bound) {
    check_dim(d);
    if (atoms.empty()) throw InvalidInput("atomic measure needs at least one atom");
    double mass = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.weight > 0.0 && std::isfinite(a.weight))) throw InvalidInput("atom weights must be positive");
        for (int i = d; i < kMaxDim; ++i)
            if (a.direction[i] != 0.0) throw InvalidInput("atom direction has components beyond the dimension");
        if (std::abs(norm(a.direction) - 1.0) > 1e-12) throw InvalidInput("atom directions must be unit vectors");
        mass += a.weight;
    }
    for (const Atom& a : atoms) {
        const Point minus = -1.0 * a.direction;
        const bool paired = std::any_of(atoms.begin(), atoms.end(), [&](const Atom& b) {
            return distance(b.direction, minus) <= 1e-12 && std::abs(b.weight - a.weight) <= 1e-12 * a.weight;
        });
        if (!paired) throw InvalidInput("atomic measure is not symmetric: missing the antipode of an atom");
    }
    SpectralMeasure m;
    m.d_ = d;
    m.uniform_ = false;
    m.mass_ = mass;
    m.bound_ = mass_bound.value_or(mass);
    m.atoms_ = std::move(atoms);
    if (m.mass_ > m.bound_ * (1.0 + 1e-12)) throw InvalidInput("measure mass exceeds its declared bound");
    return m;
}

SpectralMeasure SpectralMeasure::fractional_laplacian(int d, double s) {
    check_order(s);
    return uniform(d, fractional_laplacian_constant(d, s) * sphere_area(d) / (1.0 - s));
}

double SpectralMeasure::density() const {
    if (!uniform_) throw InvalidInput("density is defined for uniform measures only");
    return mass_ / sphere_area(d_);
}

void OperatorSpec::validate() const {
    check_order(s);
    quadrature.validate();
    if (pv_inner_radii.empty()) throw InvalidInput("principal-value radius schedule is empty");
    for (std::size_t i = 0; i < pv_inner_radii.size(); ++i) {
        if (!(pv_inner_radii[i] > 0.0)) throw InvalidInput("principal-value radii must be positive");
        if (i > 0 && !(pv_inner_radii[i] < pv_inner_radii[i - 1]))
            throw InvalidInput("principal-value radii must decrease");
    }
}

FieldFunction FieldFunction::exact(std::function<double(const Point&)> f, double growth_exponent) {
    FieldFunction u;
    u.eval = [f = std::move(f)](const Point& y) { return EvaluationReport{f(y), 0.0, 1, true}; };
    u.growth_exponent = growth_exponent;
    return u;
}

FieldFunction barrier_function(double s) {
    check_order(s);
    FieldFunction u = FieldFunction::exact(
        [s](const Point& y) {
            const double q = 1.0 - dot(y, y);
            return q > 0.0 ? std::pow(q, s) : 0.0;
        },
        0.0);
    u.sphere_breaks = {1.0};
    u.support_radius = 1.0;
    return u;
}

double fractional_laplacian_constant(int d, double s) {
    check_order(s);
    return s * std::pow(4.0, s) * std::tgamma(0.5 * d + s) / (std::pow(kPi, 0.5 * d) * std::tgamma(1.0 - s));
}

double barrier_value(int d, double s) {
    check_order(s);
    return std::pow(4.0, s) * std::tgamma(1.0 + s) * std::tgamma(0.5 * d + s) / std::tgamma(0.5 * d);
}

double uniform_ratio_to_fractional_laplacian(const SpectralMeasure& mu, double s) {
    if (!mu.is_uniform()) throw InvalidInput("only uniform measures are proportional to the fractional Laplacian");
    return (1.0 - s) * mu.density() / fractional_laplacian_constant(mu.dim(), s);
}

// ---------------------------------------------------------------- nondegeneracy

EvaluationReport directional_moment(const SpectralMeasure& mu, double s, const Point& xi, const QuadratureSpec& spec) {
    check_order(s);
    if (!mu.is_uniform()) {
        EvaluationReport r;
        for (const Atom& a : mu.atoms()) r.value += a.weight * std::pow(std::abs(dot(a.direction, xi)), 2.0 * s);
        r.function_evals = static_cast<std::int64_t>(mu.atoms().size());
        return r;
    }
    auto f = [&](const Point& th) { return EvaluationReport{std::pow(std::abs(dot(th, xi)), 2.0 * s), 0.0, 1, true}; };
    return integrate_sphere(f, mu.dim(), spec).scaled(mu.density());
}

double nondegeneracy_constant(const SpectralMeasure& mu, double s, int xi_samples) {
    if (xi_samples < 1) throw InvalidInput("xi_samples must be positive");
    const int d = mu.dim();
    std::vector<Point> grid;
    if (d == 1) {
        grid.push_back(unit(0));
    } else if (d == 2) {
        // |theta . xi| is even in xi, so the half circle suffices.
        for (int k = 0; k < xi_samples; ++k) {
            const double phi = kPi * k / xi_samples;
            grid.push_back({std::cos(phi), std::sin(phi), 0.0});
        }
    } else {
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < xi_samples; ++k) {
            const double z = 1.0 - (k + 0.5) / xi_samples;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            grid.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
        }
    }
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    double best = std::numeric_limits<double>::infinity();
    for (const Point& xi : grid) best = std::min(best, directional_moment(mu, s, xi, spec).value);
    return best;
}

// ---------------------------------------------------------------- operator

namespace {

void check_growth(const FieldFunction& u, double s) {
    if (!u.eval) throw InvalidInput("field function has no evaluator");
    if (!u.growth_exponent) throw InvalidInput("field function must declare its growth exponent");
    if (!(*u.growth_exponent < 2.0 * s))
        throw InvalidInput("field function grows too fast: growth exponent must be < 2s");
}

// Positive r with |p + r theta| = R.
void sphere_crossings(const Point& p, const Point& theta, double R, std::vector<double>& out) {
    const double b = dot(p, theta);
    const double c = dot(p, p) - R * R;
    const double disc = b * b - c;
    if (disc < 0.0) return;
    const double root = std::sqrt(disc);
    // Stable pair of roots of r^2 + 2 b r + c.
    const double big = b >= 0.0 ? -b - root : -b + root;
    const double small = big != 0.0 ? c / big : 0.0;
    for (double r : {big, small})
        if (r > 0.0 && std::isfinite(r)) out.push_back(r);
}

// Last r at which p + r theta is inside the sphere of radius R (p inside).
double exit_radius(const Point& p, const Point& theta, double R) {
    const double b = dot(p, theta);
    const double c = dot(p, p) - R * R;
    return -b + std::sqrt(std::max(0.0, b * b - c));
}

std::vector<double> break_radii(const FieldFunction& u) {
    std::vector<double> radii = u.sphere_breaks;
    if (std::isfinite(u.support_radius)) radii.push_back(u.support_radius);
    return radii;
}

// Sums per-direction integrals over the measure.
EvaluationReport integrate_measure(const SpectralMeasure& mu, const std::function<EvaluationReport(const Point&)>& f,
                                   const QuadratureSpec& spec, bool even) {
    if (!mu.is_uniform()) {
        EvaluationReport total;
        for (const Atom& a : mu.atoms()) total += f(a.direction).scaled(a.weight);
        return total;
    }
    if (mu.dim() == 1) {
        if (even) return f(unit(0)).scaled(mu.total_mass());
        return (f(unit(0)) + f(-1.0 * unit(0))).scaled(0.5 * mu.total_mass());
    }
    return integrate_sphere(f, mu.dim(), spec).scaled(mu.density());
}

}  // namespace

EvaluationReport apply_operator(const OperatorSpec& spec, const FieldFunction& u, const Point& x) {
    spec.validate();
    const double s = spec.s;
    check_growth(u, s);
    const QuadratureSpec& outer = spec.quadrature;
    const QuadratureSpec q = outer.nested();
    const EvaluationReport ux = u.eval(x);
    const std::vector<double> radii = break_radii(u);
    double break_gap = std::numeric_limits<double>::infinity();
    for (double R : radii) break_gap = std::min(break_gap, std::abs(norm(x) - R));
    const double decay = 2.0 * s - std::max(0.0, *u.growth_exponent);
    const double two_s = 2.0 * s;
    // The Taylor-model discrepancy does not shrink under subdivision, so it is
    // kept out of the adaptive estimate and bounded by its sup times the mass.
    double model_gap = 0.0;

    auto radial = [&](const Point& th) -> EvaluationReport {
        // Symmetrized second difference and its error.
        auto second_diff = [&](double r) {
            const EvaluationReport a = u.eval(x + r * th);
            const EvaluationReport b = u.eval(x + (-r) * th);
            return EvaluationReport{ux.value - 0.5 * (a.value + b.value),
                                    ux.error_estimate + 0.5 * (a.error_estimate + b.error_estimate),
                                    a.function_evals + b.function_evals, a.converged && b.converged};
        };
        auto integrand = [&](double r) {
            const EvaluationReport D = second_diff(r);
            const double w = std::pow(r, -1.0 - two_s);
            return EvaluationReport{D.value * w, D.error_estimate * w, D.function_evals, D.converged};
        };
        std::vector<double> eps;
        for (double e : spec.pv_inner_radii) eps.push_back(std::min(e, 0.5 * break_gap));
        std::vector<double> br;
        for (double R : radii) {
            sphere_crossings(x, th, R, br);
            sphere_crossings(x, -1.0 * th, R, br);
        }

        EvaluationReport far;
        const double r0 = eps.front();
        const bool bounded = std::isfinite(u.support_radius) && norm(x) <= u.support_radius;
        if (bounded) {
            const double rs = std::max(exit_radius(x, th, u.support_radius), exit_radius(x, -1.0 * th, u.support_radius));
            if (rs > r0) {
                far = integrate_1d(integrand, r0, rs, q, br);
                // Beyond rs both points are outside the support.
                far += EvaluationReport{ux.value * std::pow(rs, -two_s) / two_s,
                                        ux.error_estimate * std::pow(rs, -two_s) / two_s, 0, true};
            } else {
                far = EvaluationReport{ux.value * std::pow(r0, -two_s) / two_s,
                                       ux.error_estimate * std::pow(r0, -two_s) / two_s, 0, true};
            }
        } else {
            double L = std::max(1.0, 2.0 * r0);
            for (double b : br) L = std::max(L, b);
            far = integrate_1d(integrand, r0, L, q, br);
            far += integrate_radial_unbounded_nested(integrand, L, decay, q);
        }

        // Shrinking inner radius with the quadratic model on (0, eps).
        EvaluationReport acc = far;
        double previous = 0.0;
        double current = 0.0;
        for (std::size_t k = 0; k < eps.size(); ++k) {
            if (k > 0 && eps[k] < eps[k - 1]) acc += integrate_1d(integrand, eps[k], eps[k - 1], q);
            const EvaluationReport D = second_diff(eps[k]);
            const double model = D.value * std::pow(eps[k], -two_s) / (2.0 - two_s);
            previous = current;
            current = acc.value + model;
            if (k + 1 == eps.size()) {
                acc.error_estimate += D.error_estimate * std::pow(eps[k], -two_s) / (2.0 - two_s);
                acc.function_evals += D.function_evals;
            }
        }
        EvaluationReport out = acc;
        out.value = current;
        if (eps.size() > 1) model_gap = std::max(model_gap, std::abs(current - previous));
        return out;
    };

    EvaluationReport total = integrate_measure(spec.measure, radial, outer, true);
    total.error_estimate += model_gap * spec.measure.total_mass();
    return total.scaled(1.0 - s);
}

EvaluationReport tail(const OperatorSpec& spec, const FieldFunction& u, const Point& y) {
    spec.validate();
    const double s = spec.s;
    check_growth(u, s);
    const QuadratureSpec& outer = spec.quadrature;
    const QuadratureSpec q = outer.nested();
    const std::vector<double> radii = break_radii(u);
    const double decay = 2.0 * s - std::max(0.0, *u.growth_exponent);
    auto integrand = [&](const Point& th) {
        return [&, th](double t) {
            const EvaluationReport v = u.eval(y + t * th);
            const double w = std::pow(t, -1.0 - 2.0 * s);
            return EvaluationReport{std::abs(v.value) * w, v.error_estimate * w, v.function_evals, v.converged};
        };
    };
    auto radial = [&](const Point& th) -> EvaluationReport {
        std::vector<double> br;
        for (double R : radii) sphere_crossings(y, th, R, br);
        auto f = integrand(th);
        if (std::isfinite(u.support_radius) && norm(y) <= u.support_radius) {
            const double rs = exit_radius(y, th, u.support_radius);
            if (rs <= 0.5) return {};
            return integrate_1d(f, 0.5, rs, q, br);
        }
        double L = 1.0;
        for (double b : br) L = std::max(L, b);
        return integrate_1d(f, 0.5, L, q, br) + integrate_radial_unbounded_nested(f, L, decay, q);
    };
    return integrate_measure(spec.measure, radial, outer, false).scaled(1.0 - s);
}

EvaluationReport tail_space_norm(const FieldFunction& u, int d, double s, const QuadratureSpec& spec) {
    check_dim(d);
    check_order(s);
    check_growth(u, s);
    spec.validate();
    const double decay = 2.0 * s - std::max(0.0, *u.growth_exponent);
    const QuadratureSpec inner = spec.nested();
    auto radial = [&](const Point& th) -> EvaluationReport {
        auto f = [&](double r) {
            const EvaluationReport v = u.eval(r * th);
            const double w = std::pow(1.0 + r, -d - 2.0 * s) * (d == 1 ? 1.0 : (d == 2 ? r : r * r));
            return EvaluationReport{std::abs(v.value) * w, v.error_estimate * w, v.function_evals, v.converged};
        };
        if (std::isfinite(u.support_radius)) return integrate_1d(f, 0.0, u.support_radius, inner, u.sphere_breaks);
        double L = 1.0;
        for (double b : u.sphere_breaks) L = std::max(L, b);
        return integrate_1d(f, 0.0, L, inner, u.sphere_breaks) + integrate_radial_unbounded_nested(f, L, decay, inner);
    };
    EvaluationReport total = d == 1 ? radial(unit(0)) + radial(-1.0 * unit(0)) : integrate_sphere(radial, d, spec);
    return total.scaled(1.0 - s);
}

Calibration calibrate_uniform(const OperatorSpec& spec) {
    if (!spec.measure.is_uniform()) throw InvalidInput("calibration needs a uniform measure");
    const int d = spec.measure.dim();
    const EvaluationReport r = apply_operator(spec, barrier_function(spec.s), Point{0.0, 0.0, 0.0});
    const double ref = barrier_value(d, spec.s);
    return {r.value / ref, r.error_estimate / ref, uniform_ratio_to_fractional_laplacian(spec.measure, spec.s)};
}

}  // namespace fraclab
