#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/modulus.hpp"
#include "fraclab/point.hpp"

namespace fraclab {

/// C^2 cutoff: 1 on [1, plateau_end], quintic smoothstep down to 0 on
/// (plateau_end, plateau_end + width), 0 beyond.
struct CutoffFunction {
    double plateau_end = 4.0;
    double width = 0.5;

    double support_end() const { return plateau_end + width; }
};

double cutoff_eval(const CutoffFunction& eta, double r);

/// A function g on the complement of the open unit ball together with the
/// structural facts the integrators and checkers rely on.
struct ExteriorDatum {
    std::string id;
    int dim = 2;
    std::function<double(const Point&)> eval;
    /// g vanishes for |y| > support_radius.
    double support_radius = std::numeric_limits<double>::infinity();
    /// |g(y)| <= growth_bound |y|^growth_exponent.
    double growth_exponent = 0.0;
    double growth_bound = 1.0;
    /// sup of |g| over the unit sphere.
    double boundary_bound = 0.0;
    /// Radii |y| across which g is not smooth.
    std::vector<double> radial_breaks;
    /// g depends only on |y| and y1.
    bool axisymmetric_e1 = false;
    /// The modulus the datum was built from, if any.
    std::optional<ModulusFunction> modulus;
    /// Exact oscillation profile t -> max{|g(z) - g(w)| : |z - w| <= t} at
    /// oscillation_base, or at every base point when that is unset.
    std::function<double(double)> closed_form_oscillation;
    std::optional<Point> oscillation_base;

    double operator()(const Point& y) const { return eval(y); }
};

/// g(y) = omega(|y'|) eta(|y|), y = (y1, y'), d >= 2.
ExteriorDatum datum_thm15(const ModulusFunction& omega, int d, const CutoffFunction& eta = {});
/// g(x) = omega(x - 1) on [1, 3], 0 elsewhere (d = 1).
ExteriorDatum datum_prop42(const ModulusFunction& omega);
/// The construction above with omega(t) = t^s iota(t).
ExteriorDatum datum_cex14(const ModulusFunction& iota, double s, int d, const CutoffFunction& eta = {});
/// g(y) = sign(y2) |y2|^s eta(|y|), odd in y2 (d >= 2).
ExteriorDatum datum_ex43(double s, int d, const CutoffFunction& eta = {});
/// g = c.
ExteriorDatum datum_constant(double c, int d);
/// g = 1 for |y| >= 1 + a, 0 otherwise.
ExteriorDatum datum_radial_indicator(double a, int d);

/// Exact oscillation of datum_thm15 at e1: omega(t) for t <= sqrt(15) and,
/// beyond, the maximum over |w| in [1, 4.5] of omega(max |w'|) eta(|w|).
double thm15_oscillation_e1(const ModulusFunction& omega, const CutoffFunction& eta, double t);

}  // namespace fraclab
