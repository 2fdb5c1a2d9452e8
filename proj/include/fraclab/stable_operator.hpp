#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fraclab/point.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

struct Atom {
    Point direction{};
    double weight = 0.0;
};

/// Finite symmetric measure on S^{d-1}: either uniform with a given total mass
/// or a finite sum of atoms closed under theta -> -theta.
class SpectralMeasure {
public:
    static SpectralMeasure uniform(int d, double mass, std::optional<double> mass_bound = std::nullopt);
    static SpectralMeasure atomic(int d, std::vector<Atom> atoms, std::optional<double> mass_bound = std::nullopt);
    /// Uniform measure for which the operator equals the fractional Laplacian.
    static SpectralMeasure fractional_laplacian(int d, double s);

    int dim() const { return d_; }
    bool is_uniform() const { return uniform_; }
    double total_mass() const { return mass_; }
    double mass_bound() const { return bound_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    /// Mass per unit surface area (uniform only).
    double density() const;

private:
    int d_ = 1;
    bool uniform_ = true;
    double mass_ = 0.0;
    double bound_ = 0.0;
    std::vector<Atom> atoms_;
};

struct OperatorSpec {
    SpectralMeasure measure = SpectralMeasure::uniform(1, 2.0);
    double s = 0.5;
    /// Inner radii below which the second difference is replaced by its
    /// quadratic Taylor model; the last is used, the change between the last
    /// two enters the error estimate.
    std::vector<double> pv_inner_radii{0.1, 0.03, 0.01};
    QuadratureSpec quadrature;

    void validate() const;
};

/// A function on R^d with the facts the operator quadrature needs.
struct FieldFunction {
    /// Value with its own error bound (zero for closed forms).
    std::function<EvaluationReport(const Point&)> eval;
    /// |u(y)| <= M (1 + |y|)^growth_exponent; required, and must be < 2s.
    std::optional<double> growth_exponent;
    /// Radii |y| = R across which u is not smooth.
    std::vector<double> sphere_breaks;
    /// u vanishes for |y| > support_radius.
    double support_radius = std::numeric_limits<double>::infinity();

    static FieldFunction exact(std::function<double(const Point&)> f, double growth_exponent);
    double value(const Point& y) const { return eval(y).value; }
};

/// (1 - |x|^2)_+^s.
FieldFunction barrier_function(double s);

/// Normalizing constant of the fractional Laplacian,
/// s 4^s Gamma(d/2 + s) / (pi^{d/2} Gamma(1 - s)).
double fractional_laplacian_constant(int d, double s);
/// Value of the fractional Laplacian of (1 - |x|^2)_+^s inside the ball,
/// 4^s Gamma(1 + s) Gamma(d/2 + s) / Gamma(d/2).
double barrier_value(int d, double s);
/// Ratio between the operator with a uniform measure and the fractional
/// Laplacian, (1 - s) m / (|S^{d-1}| C_{d,s}).
double uniform_ratio_to_fractional_laplacian(const SpectralMeasure& mu, double s);

/// Minimum of int |theta . xi|^{2s} mu(dtheta) over a quasi-uniform grid of xi.
double nondegeneracy_constant(const SpectralMeasure& mu, double s, int xi_samples);
/// The same integral for one direction xi.
EvaluationReport directional_moment(const SpectralMeasure& mu, double s, const Point& xi, const QuadratureSpec& spec);

/// (1-s) pv int_0^inf int_S (u(x) - u(x + r theta)) r^{-1-2s} mu(dtheta) dr via
/// the symmetrized second difference.
EvaluationReport apply_operator(const OperatorSpec& spec, const FieldFunction& u, const Point& x);

/// (1-s) int_{1/2}^inf int_S |u(y + t theta)| t^{-1-2s} mu(dtheta) dt.
EvaluationReport tail(const OperatorSpec& spec, const FieldFunction& u, const Point& y);

/// (1-s) int_{R^d} |u(x)| (1 + |x|)^{-d-2s} dx.
EvaluationReport tail_space_norm(const FieldFunction& u, int d, double s, const QuadratureSpec& spec);

struct Calibration {
    /// Operator value on the barrier at the origin divided by barrier_value.
    double measured = 0.0;
    double measured_error = 0.0;
    /// uniform_ratio_to_fractional_laplacian.
    double theoretical = 0.0;
};

/// Calibrates a uniform-measure operator against the fractional Laplacian.
Calibration calibrate_uniform(const OperatorSpec& spec);

}  // namespace fraclab
