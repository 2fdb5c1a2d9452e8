#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab {

enum class ModulusKind { power, power_log, log_inverse, table, composite, times_power, raised, custom };

/// How a function behaves at t = 0.
enum class ZeroBehavior {
    exact,     // eval(0) == 0
    limit,     // eval(0) is defined as the limit 0; positive for every t > 0
    nonzero,   // eval(0) > 0: not a modulus of continuity
};

/// A nondecreasing function omega: [0, inf) -> [0, inf).
///
/// The logarithmic kinds use L(t) = log(e/t) for t <= 1 and L = 1 for t >= 1,
/// which keeps them nondecreasing on the whole half line. Besides eval(t) every
/// kind can be evaluated in the variable u = log(e/t) (eval_log), which stays
/// representable for t far below the smallest double.
class ModulusFunction {
public:
    /// t^alpha, alpha >= 0.
    static ModulusFunction power(double alpha);
    /// t^a log^{-p}(e/t), a >= 0, p >= 0.
    static ModulusFunction power_log(double a, double p);
    /// log^{-p}(e/t), p > 0.
    static ModulusFunction log_inverse(double p);
    /// Piecewise linear through (t_i, v_i); t_0 must be 0, t strictly
    /// increasing, v nondecreasing and nonnegative; constant after the last point.
    static ModulusFunction table(std::vector<std::pair<double, double>> points);
    /// scalar * inner, scalar >= 0.
    static ModulusFunction composite(double scalar, ModulusFunction inner);
    /// t^a * inner(t), a >= 0.
    static ModulusFunction times_power(double a, ModulusFunction inner);
    /// inner(t)^q, q > 0.
    static ModulusFunction raised(ModulusFunction inner, double q);
    /// Arbitrary callable; monotonicity and finiteness are checked on a sample grid.
    static ModulusFunction custom(std::string name, std::function<double(double)> f);
    static ModulusFunction zero();

    ModulusKind kind() const { return kind_; }
    ZeroBehavior zero_behavior() const;
    /// Throws InvalidModulus unless omega(0) = 0 (exactly or as a limit).
    void require_modulus(const std::string& context) const;
    std::string describe() const;

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;
    /// omega(e^{1-u}) for u >= 1 (t <= 1).
    double eval_log(double u) const;

    /// Closed form of int_{t0}^{t1} omega(r) r^{-1-s} dr for 0 < t0 <= t1 <= 1
    /// and s in [0, 1); empty when none is available.
    std::optional<double> weighted_integral_closed(double s, double t0, double t1) const;
    /// Points in (0, 1] where omega is not smooth (table breakpoints).
    std::vector<double> kinks() const;

    /// Checks monotonicity and finiteness on a log-spaced grid in (0, 8].
    void validate_samples() const;

private:
    // Any real exponent s; the public wrapper restricts it.
    std::optional<double> closed_impl(double s, double t0, double t1) const;

    ModulusKind kind_ = ModulusKind::power;
    double a_ = 1.0;  // exponent / scalar
    double p_ = 0.0;  // log power / outer exponent
    std::vector<std::pair<double, double>> table_;
    std::shared_ptr<const ModulusFunction> inner_;
    std::shared_ptr<const std::function<double(double)>> fn_;
    std::string name_;
};

/// int_{t0}^{t1} omega(r) r^{-1-s} dr for 0 < t0 < t1 <= 1: closed form when
/// available, else adaptive quadrature in u = log(e/r).
EvaluationReport weighted_integral(const ModulusFunction& omega, double s, double t0, double t1,
                                   const QuadratureSpec& spec);

}  // namespace fraclab
