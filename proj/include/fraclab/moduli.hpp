#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fraclab/exterior_data.hpp"
#include "fraclab/modulus.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

// ---------------------------------------------------------------- Dini integral

enum class DiniDecision { convergent, divergent };

struct DiniResult {
    DiniDecision decision = DiniDecision::divergent;
    /// Extrapolated value of int_0^1 iota(t)/t dt (convergent only).
    double value = std::numeric_limits<double>::quiet_NaN();
    double error_estimate = std::numeric_limits<double>::infinity();
    /// Cutoffs as u_k = log(e/delta_k), increasing.
    std::vector<double> log_cutoffs;
    /// int_{delta_k}^1 iota(t)/t dt.
    std::vector<double> partials;
    /// partials[k] - partials[k-1] (increments[0] = partials[0]).
    std::vector<double> increments;
    /// increments[k] / increments[k-1]; 0 when both vanish.
    std::vector<double> ratios;
    bool quadrature_converged = true;

    bool convergent() const { return decision == DiniDecision::convergent; }
};

/// Cutoffs delta_k = e^{1 - 2^k}, k = 1..depth, as u_k = 2^k.
std::vector<double> default_dini_cutoffs(int depth = 12);
/// Cutoffs delta_k = 10^{-k}, k = 1..depth, as u_k = 1 + k ln 10.
std::vector<double> decimal_dini_cutoffs(int depth = 12);
/// Converts decreasing cutoffs delta_k in (0, 1) to u_k = log(e/delta_k).
std::vector<double> log_cutoffs_from_deltas(const std::vector<double>& deltas);

/// Partial integrals int_{delta_k}^1 iota(t)/t dt at the given cutoffs (in
/// u = log(e/t) form). Convergent when the last four increment ratios are all
/// below 0.9; the value then adds the geometric tail of the last increment.
DiniResult dini_integral(const ModulusFunction& iota, const std::vector<double>& log_cutoffs, double tol);
inline DiniResult dini_integral(const ModulusFunction& iota, double tol = 1e-10) {
    return dini_integral(iota, default_dini_cutoffs(), tol);
}

// ---------------------------------------------------------------- sigma, kappa

/// sigma(t) = t^s (1 + int_t^1 omega(r) r^{-1-s} dr), t^s for t >= 1.
/// Throws BudgetExceeded if the integral does not reach tol.
EvaluationReport sigma(const ModulusFunction& omega, double s, double t, double tol = 1e-10);
/// kappa(t) = 1 + int_t^1 omega(r) r^{-1-s} dr, 1 for t >= 1.
double kappa(const ModulusFunction& omega, double s, double t, double tol = 1e-10);

// ---------------------------------------------------------------- oscillation

/// Nondecreasing profile xi_z(t) = max{|g(z) - g(w)| : |z - w| <= t}.
///
/// Either exact (closed form) or a sampled lower bound stored as a step
/// function: xi(t) is the running maximum over samples at distance <= t.
class OscillationProfile {
public:
    static OscillationProfile closed_form(Point z, std::function<double(double)> xi);
    static OscillationProfile sampled(Point z, std::vector<double> distances, std::vector<double> values);

    const Point& base_point() const { return z_; }
    bool is_closed_form() const { return static_cast<bool>(closed_); }
    double operator()(double t) const;
    /// Distances where the sampled profile jumps (empty for closed forms).
    const std::vector<double>& jump_points() const { return dist_; }
    std::size_t sample_count() const { return sample_count_; }

private:
    Point z_{};
    std::function<double(double)> closed_;
    std::vector<double> dist_;
    std::vector<double> value_;
    std::size_t sample_count_ = 0;
};

/// Oscillation profile of g at z. Uses the datum's closed form when it applies
/// at z; otherwise samples w = z + r theta for r in t_grid (and fractions of
/// it) and sphere_samples directions theta, keeping exterior w.
OscillationProfile oscillation_profile(const ExteriorDatum& g, const Point& z, const std::vector<double>& t_grid,
                                       int sphere_samples);

// ---------------------------------------------------------------- Stieltjes

struct StieltjesBracket {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t points = 0;
};

struct StieltjesResult {
    EvaluationReport report;
    double lower = 0.0;
    double upper = 0.0;
    /// Bracket after each refinement step; nested by construction.
    std::vector<StieltjesBracket> history;
};

struct StieltjesOptions {
    double tol = 1e-6;
    std::size_t max_points = 4096;
    /// Partition points to start from (in addition to 0 and t_max).
    std::vector<double> initial_points;
    std::size_t initial_uniform = 16;
};

/// int_{[0, t_max]} f dxi for f nonincreasing and xi nondecreasing, including
/// the atom f(0) xi(0) at the origin. f returns its value with an error bound;
/// the enclosures are tightened with monotonicity, so the Darboux brackets are
/// valid and nested. The interval with the widest bracket is bisected until
/// upper - lower <= tol. Throws InvalidInput on monotonicity violations.
StieltjesResult stieltjes_integral(const std::function<EvaluationReport(double)>& f,
                                   const std::function<double(double)>& xi, double t_max,
                                   const StieltjesOptions& options = {});

// ---------------------------------------------------------------- seminorms

struct HoelderEstimate {
    /// Largest sampled ratio; +inf when a nonzero difference meets omega = 0.
    double seminorm = 0.0;
    std::string modulus;
    std::size_t pair_count = 0;
    Point max_a{};
    Point max_b{};
};

/// Sampled lower bound of sup |g(y) - g(z)| / omega(|y - z| + d_y + d_z) over
/// exterior pairs, with d_y = |y| - 1. Samples are stratified toward the
/// sphere (radii 1 + 10^{-k}) and include close pairs and pairs through the
/// datum's oscillation base.
HoelderEstimate seminorm_ext(const ExteriorDatum& g, const ModulusFunction& omega, std::size_t sample_pairs,
                             std::uint64_t seed, Execution mode = Execution::parallel);

struct BallRegion {
    Point center{};
    double radius = 1.0;
    int dim = 1;
};

/// Sampled lower bound of sup |u(x) - u(y)| / omega(|x - y|) over pairs in the
/// closed ball, including pairs through its center.
HoelderEstimate seminorm_interior(const std::function<double(const Point&)>& u, const BallRegion& region,
                                  const ModulusFunction& omega, std::size_t sample_pairs, std::uint64_t seed,
                                  Execution mode = Execution::parallel);

/// A random nondecreasing table modulus on [0, 2] with omega(0) = 0.
ModulusFunction random_table_modulus(std::mt19937_64& rng, int max_points = 8);

}  // namespace fraclab
