#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fraclab/exterior_data.hpp"
#include "fraclab/moduli.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/stable_operator.hpp"

namespace fraclab {

/// Poisson kernel of the fractional Laplacian on the unit ball,
/// c_ds ((1 - |x|^2) / (|y|^2 - 1))^s |x - y|^{-d}.
struct PoissonKernel {
    int d = 1;
    double s = 0.5;
    /// Gamma(d/2) sin(pi s) / pi^{d/2 + 1}.
    double c_ds = 0.0;

    static PoissonKernel make(int d, double s);
};

double poisson_kernel_eval(const PoissonKernel& kernel, const Point& x, const Point& y);

struct BallProblem {
    PoissonKernel kernel;
    ExteriorDatum datum;

    static BallProblem make(const ExteriorDatum& g, double s);
    /// Dimensions agree and the datum grows slower than |y|^{2s}.
    void validate() const;
};

/// u(x) = int_{|y| > 1} P_s(x, y) g(y) dy. A quadrature failure is reported
/// through converged = false.
EvaluationReport solve(const BallProblem& problem, const Point& x, const QuadratureSpec& spec);

/// v_t(x): the solution with datum 0 on B_t(z) and 1 elsewhere outside the
/// ball. Exact annular geometry when x lies on the segment [0, z) with |z| = 1,
/// an indicator integrand otherwise.
EvaluationReport solve_vt(const PoissonKernel& kernel, const Point& z, double t, const Point& x,
                          const QuadratureSpec& spec);

struct InteriorBoundaryResult {
    /// |u(x) - g(z)| and its error bound.
    double lhs = 0.0;
    double lhs_error = 0.0;
    /// Stieltjes integral of v_t(x) against the oscillation profile of g at z
    /// over [0, t_max], midpoint and certified bracket.
    double rhs = 0.0;
    double rhs_lower = 0.0;
    double rhs_upper = 0.0;
    /// rhs_lower - (lhs + lhs_error).
    double slack = 0.0;
    bool holds = false;
    std::size_t stieltjes_points = 0;
    bool closed_form_profile = false;
};

struct InteriorBoundaryOptions {
    /// Bracket width for the Stieltjes integral relative to xi(t_max).
    double relative_tol = 1e-3;
    std::size_t max_points = 2048;
    /// Sampling of the oscillation profile when no closed form applies.
    int profile_radii = 256;
    int profile_directions = 64;
};

/// Compares |u(x) - g(z)| with int_0^{t_max} v_t(x) dxi_z(t). Truncating at
/// t_max only lowers the right side, so holds = true is conservative.
InteriorBoundaryResult interior_to_boundary_check(const BallProblem& problem, const Point& x, const Point& z,
                                                  double t_max, const QuadratureSpec& spec,
                                                  const InteriorBoundaryOptions& options = {});

/// The solved u as a field: solve inside the ball, g outside.
FieldFunction solution_field(const BallProblem& problem, const QuadratureSpec& spec);

struct HarmonicityResult {
    /// A u(x) / calibration.
    double residual = 0.0;
    double error_estimate = 0.0;
    /// tail(u, x) for the same operator; the natural scale of the residual.
    double tail_scale = 0.0;
    bool converged = true;
};

/// Applies the fractional-Laplacian-normalized uniform operator to the solved
/// u at x and divides by calibration.
HarmonicityResult harmonicity_residual(const BallProblem& problem, const Point& x, double calibration,
                                       const QuadratureSpec& spec);
double harmonicity_check(const BallProblem& problem, const Point& x, double calibration, const QuadratureSpec& spec);

struct SolutionRow {
    Point x{};
    EvaluationReport report;
};

/// Solves at every point; points are independent.
std::vector<SolutionRow> solve_many(const BallProblem& problem, const std::vector<Point>& xs,
                                    const QuadratureSpec& spec, Execution mode = Execution::parallel);
/// CSV with columns x1..xd,value,error_estimate,function_evals.
void write_solution_csv(std::ostream& out, const std::vector<SolutionRow>& rows, int d);

}  // namespace fraclab
