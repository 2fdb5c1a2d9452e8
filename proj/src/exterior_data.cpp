#include "fraclab/exterior_data.hpp"

#include <cmath>
#include <string>

#include "fraclab/error.hpp"

namespace fraclab {

double cutoff_eval(const CutoffFunction& eta, double r) {
    if (!(r >= 0.0)) throw InvalidInput("cutoff evaluated at negative radius");
    if (r <= eta.plateau_end) return 1.0;
    if (r >= eta.support_end()) return 0.0;
    const double w = (r - eta.plateau_end) / eta.width;
    const double w3 = w * w * w;
    return 1.0 - w3 * (10.0 - 15.0 * w + 6.0 * w * w);
}

namespace {

double tangential_norm(const Point& y, int d) {
    double q = 0.0;
    for (int i = 1; i < d; ++i) q += y[i] * y[i];
    return std::sqrt(q);
}

void check_cutoff(const CutoffFunction& eta) {
    if (!(eta.plateau_end >= 1.0 && eta.width > 0.0)) throw InvalidInput("cutoff needs plateau_end >= 1, width > 0");
}

}  // namespace

double thm15_oscillation_e1(const ModulusFunction& omega, const CutoffFunction& eta, double t) {
    if (!(t >= 0.0)) throw InvalidInput("oscillation radius must be nonnegative");
    const double plateau_reach = std::sqrt(eta.plateau_end * eta.plateau_end - 1.0);
    if (t <= plateau_reach) return omega(t);
    // Largest |w'| on the sphere |w| = rho within distance t of e1.
    auto q_max = [t](double rho) {
        if (std::abs(rho - 1.0) > t) return -1.0;
        const double c = 0.5 * (rho * rho + 1.0 - t * t);
        if (c <= 0.0) return rho;
        return std::sqrt(std::max(0.0, rho * rho - c * c));
    };
    // q_max increases in rho up to the plateau end, so only the transition
    // band needs searching.
    double best = omega(std::max(0.0, q_max(eta.plateau_end)));
    constexpr int n = 2000;
    for (int i = 1; i <= n; ++i) {
        const double rho = eta.plateau_end + eta.width * i / n;
        const double q = q_max(rho);
        if (q < 0.0) continue;
        best = std::max(best, omega(q) * cutoff_eval(eta, rho));
    }
    return best;
}

ExteriorDatum datum_thm15(const ModulusFunction& omega, int d, const CutoffFunction& eta) {
    if (d < 2) throw DimensionError("datum_thm15 needs d >= 2; use datum_prop42 for d = 1");
    if (d > kMaxDim) throw DimensionError("datum_thm15 supports d <= 3");
    omega.require_modulus("datum_thm15");
    check_cutoff(eta);
    ExteriorDatum g;
    g.id = "thm15";
    g.dim = d;
    g.eval = [omega, eta, d](const Point& y) {
        return omega(tangential_norm(y, d)) * cutoff_eval(eta, norm(y));
    };
    g.support_radius = eta.support_end();
    g.growth_exponent = 0.0;
    g.growth_bound = omega(eta.support_end());
    g.boundary_bound = omega(1.0);
    g.radial_breaks = {eta.plateau_end, eta.support_end()};
    g.axisymmetric_e1 = true;
    g.modulus = omega;
    g.closed_form_oscillation = [omega, eta](double t) { return thm15_oscillation_e1(omega, eta, t); };
    g.oscillation_base = unit(0);
    return g;
}

ExteriorDatum datum_prop42(const ModulusFunction& omega) {
    omega.require_modulus("datum_prop42");
    ExteriorDatum g;
    g.id = "prop42";
    g.dim = 1;
    g.eval = [omega](const Point& y) {
        const double x = y[0];
        return (x >= 1.0 && x <= 3.0) ? omega(x - 1.0) : 0.0;
    };
    g.support_radius = 3.0;
    g.growth_bound = omega(2.0);
    g.boundary_bound = omega(0.0);
    g.radial_breaks = {3.0};
    g.axisymmetric_e1 = true;
    g.modulus = omega;
    g.closed_form_oscillation = [omega](double t) { return omega(std::min(t, 2.0)); };
    g.oscillation_base = unit(0);
    return g;
}

ExteriorDatum datum_cex14(const ModulusFunction& iota, double s, int d, const CutoffFunction& eta) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
    const ModulusFunction omega = ModulusFunction::times_power(s, iota);
    ExteriorDatum g = d == 1 ? datum_prop42(omega) : datum_thm15(omega, d, eta);
    g.id = "cex14";
    return g;
}

ExteriorDatum datum_ex43(double s, int d, const CutoffFunction& eta) {
    if (d < 2) throw DimensionError("datum_ex43 needs d >= 2");
    if (d > kMaxDim) throw DimensionError("datum_ex43 supports d <= 3");
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
    check_cutoff(eta);
    ExteriorDatum g;
    g.id = "ex43";
    g.dim = d;
    g.eval = [s, eta](const Point& y) {
        return std::copysign(std::pow(std::abs(y[1]), s), y[1]) * cutoff_eval(eta, norm(y));
    };
    g.support_radius = eta.support_end();
    g.growth_bound = std::pow(eta.support_end(), s);
    g.boundary_bound = 1.0;
    g.radial_breaks = {eta.plateau_end, eta.support_end()};
    // |a|^s sign(a) is 2^{1-s}-Hoelder of order s; the cutoff is Lipschitz
    // with constant 15/8 / width on a set where |y2|^s <= 4.5^s.
    const double lip_eta = 15.0 / (8.0 * eta.width);
    const double scale = std::pow(2.0, 1.0 - s) + lip_eta * std::pow(eta.support_end(), s) *
                                                      std::pow(2.0 * eta.support_end(), 1.0 - s);
    g.modulus = ModulusFunction::composite(scale, ModulusFunction::power(s));
    return g;
}

ExteriorDatum datum_constant(double c, int d) {
    if (d < 1 || d > kMaxDim) throw DimensionError("datum_constant supports d = 1, 2, 3");
    ExteriorDatum g;
    g.id = "constant";
    g.dim = d;
    g.eval = [c](const Point&) { return c; };
    g.growth_bound = std::abs(c);
    g.boundary_bound = std::abs(c);
    g.axisymmetric_e1 = true;
    g.modulus = ModulusFunction::zero();
    g.closed_form_oscillation = [](double) { return 0.0; };
    return g;
}

ExteriorDatum datum_radial_indicator(double a, int d) {
    if (d < 1 || d > kMaxDim) throw DimensionError("datum_radial_indicator supports d = 1, 2, 3");
    if (!(a > 0.0)) throw InvalidInput("indicator offset must be positive");
    ExteriorDatum g;
    g.id = "radial_indicator";
    g.dim = d;
    g.eval = [a](const Point& y) { return norm(y) >= 1.0 + a ? 1.0 : 0.0; };
    g.growth_bound = 1.0;
    g.boundary_bound = 0.0;
    g.radial_breaks = {1.0 + a};
    g.axisymmetric_e1 = true;
    // Exact at any boundary point: the nearest point with g = 1 is at distance a.
    g.closed_form_oscillation = [a](double t) { return t >= a ? 1.0 : 0.0; };
    g.oscillation_base = unit(0);
    return g;
}

}  // namespace fraclab
