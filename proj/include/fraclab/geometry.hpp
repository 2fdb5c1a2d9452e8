#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/moduli.hpp"
#include "fraclab/modulus.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/point.hpp"

namespace fraclab {

/// A boundary point with the rotation R_z taking the inward normal to +e_d.
/// Local coordinates are local_i = basis[i] . (p - z); basis[d-1] is the
/// inward normal.
struct BoundaryFrame {
    Point z{};
    std::array<Point, 3> basis{};

    static BoundaryFrame from_normal(const Point& z, const Point& inward_normal, int d);
    Point to_local(const Point& p, int d) const;
    Point to_world(const Point& local, int d) const;
};

class DomainOracle {
public:
    /// Unit ball with `boundary_points` quasi-uniform boundary frames.
    static DomainOracle ball(int d, int boundary_points = 32);
    /// {x_d > 0} with the frame at the origin.
    static DomainOracle half_space(int d);
    /// {x_d > -|x'|^beta} with the frame at the tip.
    static DomainOracle cusp(int d, double beta = 0.5);
    static DomainOracle custom(std::string name, int d, std::function<bool(const Point&)> inside,
                               std::vector<BoundaryFrame> frames, std::function<double(const Point&)> distance);

    const std::string& name() const { return name_; }
    int dim() const { return d_; }
    bool inside(const Point& p) const { return inside_(p); }
    const std::vector<BoundaryFrame>& frames() const { return frames_; }
    /// Frame listed at z, or nullptr.
    const BoundaryFrame* frame_at(const Point& z) const;
    /// Distance to the boundary: exact for the ball and half-space.
    double distance_to_boundary(const Point& p) const { return distance_(p); }
    bool exact_distance() const { return exact_distance_; }

private:
    std::string name_;
    int d_ = 2;
    std::function<bool(const Point&)> inside_;
    std::vector<BoundaryFrame> frames_;
    std::function<double(const Point&)> distance_;
    bool exact_distance_ = false;
};

/// {(x', x_d) : -depth < x_d < -|x'| omega(|x'|)} in local coordinates.
struct Paraboloid {
    ModulusFunction omega = ModulusFunction::power(1.0);
    double depth = 0.5;

    bool contains(const Point& local, int d) const;
};

struct ExteriorDiniCheck {
    bool holds_on_samples = true;
    std::optional<Point> witness;
    std::size_t samples_checked = 0;
};

/// Local sample points of the paraboloid, stratified in |x'| over six decades
/// below 1 and in depth (half of them within 10^{-6..0} of the upper surface).
std::vector<Point> paraboloid_samples(const Paraboloid& P, int d, std::size_t samples, std::uint64_t seed);

/// Maps the paraboloid samples to the domain's frame at z and requires each
/// to lie outside. The witness is the violating point with the lowest sample
/// index. Throws InvalidInput when z has no listed frame.
ExteriorDiniCheck check_exterior_dini(const DomainOracle& domain, const Point& z, const Paraboloid& P,
                                      std::size_t samples, std::uint64_t seed, Execution mode = Execution::parallel);

enum class DiniVariant { plain, two_s };

struct DiniClassResult {
    bool satisfied = false;
    DiniResult report;
};

/// Dini test of omega (plain) or of omega^{2s} (two_s).
DiniClassResult check_dini_class(const ModulusFunction& omega, double s, DiniVariant variant);

}  // namespace fraclab
