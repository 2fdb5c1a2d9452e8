#include "fraclab/quadrature.hpp"

#include <numbers>
#include <string>

namespace fraclab {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidInput("quadrature tolerances must be positive");
    if (max_subdivisions < 64) throw InvalidInput("max_subdivisions must be at least 64");
    if (!(split_factor >= 2.0)) throw InvalidInput("near-boundary split factor must be >= 2");
    if (!(singular_exponent > 0.0 && singular_exponent < 1.0))
        throw InvalidInput("singular exponent must lie in (0, 1)");
}

QuadratureSpec QuadratureSpec::nested() const { return tightened(10.0); }

QuadratureSpec QuadratureSpec::tightened(double factor) const {
    QuadratureSpec q = *this;
    q.rel_tol /= factor;
    q.abs_tol /= factor;
    return q;
}

namespace detail {

std::vector<double> sorted_breaks(double a, double b, std::span<const double> breaks) {
    std::vector<double> nodes;
    nodes.reserve(breaks.size() + 2);
    nodes.push_back(a);
    for (double x : breaks)
        if (x > a && x < b && std::isfinite(x)) nodes.push_back(x);
    nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

}  // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;

EvaluationReport as_report(double v) { return {v, 0.0, 1, true}; }

// lo + h 2^j strictly inside (lo, hi).
void add_graded(std::vector<double>& out, double lo, double hi, double h) {
    if (!(h > 0.0)) return;
    for (double x = h; lo + x < hi; x *= 2.0) out.push_back(lo + x);
}

}  // namespace

EvaluationReport integrate_singular_anchor(const std::function<EvaluationReport(Radius)>& f, double anchor,
                                           double e_lo, double e_hi, double s, SingularEnd side,
                                           const QuadratureSpec& spec, std::span<const double> e_breaks) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("singular exponent must lie in (0, 1)");
    if (!(e_lo >= 0.0)) throw InvalidInput("offsets must be nonnegative");
    if (!(e_hi > e_lo)) return {};
    const double p = 1.0 - s;
    const double inv_p = 1.0 / p;
    const double jac_pow = s / p;
    const double sign = side == SingularEnd::lower ? 1.0 : -1.0;
    auto g = [&](double w) -> EvaluationReport {
        const double e = std::pow(w, inv_p);
        if (!(e > 0.0)) return {};
        const Radius r{anchor + sign * e, e};
        return f(r).scaled(inv_p * std::pow(w, jac_pow));
    };
    std::vector<double> wb;
    wb.reserve(e_breaks.size());
    for (double e : e_breaks)
        if (e > e_lo && e < e_hi) wb.push_back(std::pow(e, p));
    return integrate_1d(g, std::pow(e_lo, p), std::pow(e_hi, p), spec, wb);
}

EvaluationReport integrate_radial_singular(const std::function<double(Radius)>& f, double s, double R,
                                           const QuadratureSpec& spec) {
    if (!(R > 1.0)) throw InvalidInput("integrate_radial_singular: requires R > 1");
    return integrate_singular_anchor([&](Radius r) { return as_report(f(r)); }, 1.0, 0.0, R - 1.0, s,
                                     SingularEnd::lower, spec);
}

EvaluationReport integrate_radial_unbounded_nested(const std::function<EvaluationReport(double)>& f, double R,
                                                   double decay_exponent, const QuadratureSpec& spec) {
    if (!(decay_exponent > 0.0)) throw InvalidInput("decay exponent must be positive");
    if (!(R > 0.0)) throw InvalidInput("integrate_radial_unbounded: requires R > 0");
    const double a = decay_exponent;
    auto g = [&](double v) -> EvaluationReport {
        const double rho = R * std::pow(v, -1.0 / a);
        if (!std::isfinite(rho)) return {};
        const double jac = (rho / a) / v;
        return f(rho).scaled(jac);
    };
    return integrate_1d(g, 0.0, 1.0, spec);
}

EvaluationReport integrate_radial_unbounded(const std::function<double(double)>& f, double R,
                                            double decay_exponent, const QuadratureSpec& spec) {
    return integrate_radial_unbounded_nested([&](double rho) { return as_report(f(rho)); }, R, decay_exponent,
                                             spec);
}

double sphere_area(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        default: return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
    }
}

EvaluationReport integrate_sphere(const std::function<EvaluationReport(const Point&)>& f, int d,
                                  const QuadratureSpec& spec) {
    if (d == 1) return f(Point{1.0, 0.0, 0.0}) + f(Point{-1.0, 0.0, 0.0});
    const QuadratureSpec inner = spec.nested();
    if (d == 2) {
        auto g = [&](double phi) { return f(Point{std::cos(phi), std::sin(phi), 0.0}); };
        const double br[] = {0.5 * kPi, kPi, 1.5 * kPi};
        return integrate_1d(g, 0.0, 2.0 * kPi, spec, br);
    }
    if (d == 3) {
        auto g = [&](double theta) -> EvaluationReport {
            const double st = std::sin(theta);
            const double ct = std::cos(theta);
            auto h = [&](double psi) { return f(Point{st * std::cos(psi), st * std::sin(psi), ct}); };
            const double br[] = {0.5 * kPi, kPi, 1.5 * kPi};
            return integrate_1d(h, 0.0, 2.0 * kPi, inner, br).scaled(st);
        };
        const double br[] = {0.5 * kPi};
        return integrate_1d(g, 0.0, kPi, spec, br);
    }
    throw DimensionError("integrate_sphere supports d = 1, 2, 3");
}

namespace {

// Shared state of one exterior integration: the kernel axis z, its frame, and
// the boundary length scale delta = 1 - |x_eval|.
struct ExteriorGeometry {
    const ExteriorIntegrand* F = nullptr;
    int d = 2;
    double s = 0.5;
    double delta = 1.0;
    Frame frame;
};

// Radial integral of rho^{d-1} F(rho u) over rho in (1 + e0, support).
EvaluationReport far_ray(const ExteriorGeometry& g, const Point& u, double e0, const QuadratureSpec& spec) {
    const ExteriorIntegrand& F = *g.F;
    const double support = F.support_radius;
    EvaluationReport total;
    if (1.0 + e0 >= support) return total;
    const int dm1 = g.d - 1;
    auto value_at = [&](double rho, double e) {
        const ExteriorPoint p{rho * u, e * (2.0 + e)};
        const double v = F.f(p);
        return dm1 == 0 ? v : (dm1 == 1 ? rho * v : rho * rho * v);
    };
    const QuadratureSpec piece = spec.tightened(3.0);

    const double e_split = std::min(1.0, support - 1.0);
    if (e0 < e_split) {
        std::vector<double> eb;
        add_graded(eb, 0.0, e_split, g.delta);
        for (double b : F.radial_breaks) eb.push_back(b - 1.0);
        total += integrate_singular_anchor(
            [&](Radius r) { return as_report(value_at(r.rho, r.excess)); }, 1.0, e0, e_split, g.s,
            SingularEnd::lower, piece, eb);
    }

    const double lo = std::max(2.0, 1.0 + e0);
    if (lo >= support) return total;
    auto plain = [&](double rho) { return value_at(rho, rho - 1.0); };
    if (std::isfinite(support)) {
        total += integrate_1d(plain, lo, support, piece, F.radial_breaks);
        return total;
    }
    double last = lo;
    for (double b : F.radial_breaks)
        if (b > last) last = b;
    if (last > lo) total += integrate_1d(plain, lo, last, piece, F.radial_breaks);
    total += integrate_radial_unbounded(plain, last, F.decay_exponent, piece);
    return total;
}

// Offset beyond the unit sphere where the ray at polar angle theta from z
// leaves B_R(z); zero when the ray starts outside it.
double far_start(double theta, double R) {
    if (R <= 0.0) return 0.0;
    const double sn = std::sin(theta);
    const double disc = R * R - sn * sn;
    if (disc <= 0.0) return 0.0;
    const double h = std::sin(0.5 * theta);
    return std::max(0.0, std::sqrt(disc) - 2.0 * h * h);
}

double cap_angle(double R) {
    if (R <= 0.0) return 0.0;
    if (R >= 2.0) return kPi;
    return std::acos(1.0 - 0.5 * R * R);
}

// Exterior minus B_R(z) in spherical coordinates about the origin with polar
// axis z.
EvaluationReport far_region(const ExteriorGeometry& g, double R, const QuadratureSpec& spec) {
    const Frame& fr = g.frame;
    const QuadratureSpec inner = spec.nested();
    const double theta_c = cap_angle(R);
    std::vector<double> tb;
    if (theta_c > 0.0 && theta_c < kPi) {
        tb.push_back(theta_c);
        add_graded(tb, theta_c, kPi, theta_c);
    }
    add_graded(tb, 0.0, kPi, g.delta);
    tb.push_back(0.5 * kPi);

    if (g.d == 1) {
        // Rays along +z and -z.
        const double plus_start = R;
        const double minus_start = std::max(0.0, R - 2.0);
        const QuadratureSpec half = spec.tightened(2.0);
        return far_ray(g, fr.axis, plus_start, half) + far_ray(g, -1.0 * fr.axis, minus_start, half);
    }
    if (g.d == 2) {
        auto G = [&](double phi) -> EvaluationReport {
            const double e0 = far_start(phi, R);
            const double c = std::cos(phi);
            const double sn = std::sin(phi);
            const Point up = c * fr.axis + sn * fr.t1;
            const Point dn = c * fr.axis + (-sn) * fr.t1;
            return far_ray(g, up, e0, inner) + far_ray(g, dn, e0, inner);
        };
        return integrate_1d(G, 0.0, kPi, spec, tb);
    }
    const QuadratureSpec inner2 = inner.nested();
    auto H = [&](double theta) -> EvaluationReport {
        const double e0 = far_start(theta, R);
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        const Point base = ct * fr.axis;
        if (g.F->axisymmetric) return far_ray(g, base + st * fr.t1, e0, inner).scaled(2.0 * kPi * st);
        auto P = [&](double psi) -> EvaluationReport {
            const Point a = base + (st * std::cos(psi)) * fr.t1;
            const Point b = (st * std::sin(psi)) * fr.t2;
            return far_ray(g, a + b, e0, inner2) + far_ray(g, a - b, e0, inner2);
        };
        const double pb[] = {0.5 * kPi};
        return integrate_1d(P, 0.0, kPi, inner, pb).scaled(st);
    };
    return integrate_1d(H, 0.0, kPi, spec, tb);
}

// Radial integral over r in (r_in, r_out) along y = z + r w with w at angle
// alpha (cosine c) from z; the factor r^{d-1} is included.
EvaluationReport near_ray(const ExteriorGeometry& g, const Point& w, double c, double r_in, double r_out,
                          const QuadratureSpec& spec) {
    const ExteriorIntegrand& F = *g.F;
    const double anchor = std::max(0.0, -2.0 * c);
    const double e_lo = std::max(r_in - anchor, 0.0);
    const double e_hi = r_out - anchor;
    if (!(e_hi > e_lo)) return {};
    const double two_c = 2.0 * std::abs(c);
    const int dm1 = g.d - 1;
    const Point& z = g.frame.axis;
    auto f = [&](Radius r) -> EvaluationReport {
        const ExteriorPoint p{z + r.rho * w, r.excess * (r.excess + two_c)};
        if (std::isfinite(F.support_radius) && norm(p.y) > F.support_radius) return {};
        const double v = F.f(p);
        return as_report(dm1 == 1 ? r.rho * v : r.rho * r.rho * v);
    };
    std::vector<double> eb;
    add_graded(eb, -anchor, e_hi, g.delta);
    eb.push_back(two_c);
    return integrate_singular_anchor(f, anchor, e_lo, e_hi, g.s, SingularEnd::lower, spec, eb);
}

// Exterior points with r_in < |y - z| < r_out in local polar coordinates
// about z (d = 2, 3).
EvaluationReport near_annulus(const ExteriorGeometry& g, double r_in, double r_out, const QuadratureSpec& spec) {
    const Frame& fr = g.frame;
    const QuadratureSpec inner = spec.nested();
    const double alpha_max = r_out >= 2.0 ? kPi : std::acos(-0.5 * r_out);
    std::vector<double> ab;
    ab.push_back(0.5 * kPi);
    for (double h = g.delta; h < 0.5 * kPi; h *= 2.0) {
        ab.push_back(0.5 * kPi - h);
        ab.push_back(0.5 * kPi + h);
    }
    if (r_in > 0.0 && r_in < 2.0) ab.push_back(std::acos(-0.5 * r_in));

    if (g.d == 2) {
        auto G = [&](double alpha) -> EvaluationReport {
            const double c = std::cos(alpha);
            const double sn = std::sin(alpha);
            const Point up = c * fr.axis + sn * fr.t1;
            const Point dn = c * fr.axis + (-sn) * fr.t1;
            return near_ray(g, up, c, r_in, r_out, inner) + near_ray(g, dn, c, r_in, r_out, inner);
        };
        return integrate_1d(G, 0.0, alpha_max, spec, ab);
    }
    const QuadratureSpec inner2 = inner.nested();
    auto H = [&](double alpha) -> EvaluationReport {
        const double c = std::cos(alpha);
        const double sa = std::sin(alpha);
        const Point base = c * fr.axis;
        if (g.F->axisymmetric) return near_ray(g, base + sa * fr.t1, c, r_in, r_out, inner).scaled(2.0 * kPi * sa);
        auto P = [&](double psi) -> EvaluationReport {
            const Point a = base + (sa * std::cos(psi)) * fr.t1;
            const Point b = (sa * std::sin(psi)) * fr.t2;
            return near_ray(g, a + b, c, r_in, r_out, inner2) + near_ray(g, a - b, c, r_in, r_out, inner2);
        };
        const double pb[] = {0.5 * kPi};
        return integrate_1d(P, 0.0, kPi, inner, pb).scaled(sa);
    };
    return integrate_1d(H, 0.0, alpha_max, spec, ab);
}

void check_dimension(int d) {
    if (d < 1 || d > 3) throw DimensionError("exterior integration supports d = 1, 2, 3, got " + std::to_string(d));
}

}  // namespace

EvaluationReport integrate_exterior_outside(const ExteriorIntegrand& F, int d, const Point& x_eval, const Point& z,
                                            double t, double s, const QuadratureSpec& spec) {
    check_dimension(d);
    spec.validate();
    if (!F.f) throw InvalidInput("exterior integrand is empty");
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
    if (!(t >= 0.0)) throw InvalidInput("excluded radius must be nonnegative");
    if (std::abs(norm(z) - 1.0) > 1e-12) throw InvalidInput("kernel axis must be a unit vector");
    const double lambda = dot(x_eval, z);
    if (!(lambda >= 0.0 && lambda < 1.0) || distance(x_eval, lambda * z) > 1e-12)
        throw DomainError("evaluation point must lie on the segment [0, z)");
    if (!(F.decay_exponent > 0.0)) throw InvalidInput("decay exponent must be positive");

    ExteriorGeometry g;
    g.F = &F;
    g.d = d;
    g.s = s;
    g.delta = 1.0 - lambda;
    g.frame = Frame::around(z, d);

    if (d == 1) return far_region(g, t, spec);
    const double near_radius = spec.split_factor * g.delta;
    if (t == 0.0 && near_radius >= 1.0) return far_region(g, 0.0, spec);
    // A small excluded ball is a coordinate boundary in the local polar
    // system; in the spherical one its edge sits a distance ~t^3 from a
    // square-root branch of the ray start, which the rule cannot resolve.
    const double r_out = std::min(1.0, std::max(near_radius, 2.0 * t));
    if (t >= r_out) return far_region(g, t, spec);
    const QuadratureSpec half = spec.tightened(2.0);
    return near_annulus(g, t, r_out, half) + far_region(g, r_out, half);
}

EvaluationReport integrate_exterior_ball(const ExteriorIntegrand& F, int d, const Point& x_eval, double s,
                                         const QuadratureSpec& spec) {
    const double r = norm(x_eval);
    if (!(r < 1.0)) throw DomainError("evaluation point must lie in the open unit ball");
    const Point z = r > 0.0 ? (1.0 / r) * x_eval : unit(0);
    // Snap to the exact segment so the axis check in integrate_exterior_outside passes.
    const Point x = r > 0.0 ? r * z : x_eval;
    return integrate_exterior_outside(F, d, x, z, 0.0, s, spec);
}

}  // namespace fraclab
