#include "fraclab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

void check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw DimensionError("geometry supports d = 1, 2, 3");
}

double tangential_norm(const Point& p, int d) {
    double q = 0.0;
    for (int i = 0; i + 1 < d; ++i) q += p[i] * p[i];
    return std::sqrt(q);
}

// Quasi-uniform points on S^{d-1}.
std::vector<Point> sphere_points(int d, int n) {
    std::vector<Point> out;
    if (d == 1) {
        out.push_back(unit(0));
        out.push_back(-1.0 * unit(0));
        return out;
    }
    for (int k = 0; k < n; ++k) {
        if (d == 2) {
            const double phi = 2.0 * std::numbers::pi * k / n;
            out.push_back({std::cos(phi), std::sin(phi), 0.0});
        } else {
            const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
            const double z = 1.0 - 2.0 * (k + 0.5) / n;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            out.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
        }
    }
    return out;
}

}  // namespace

BoundaryFrame BoundaryFrame::from_normal(const Point& z, const Point& inward_normal, int d) {
    check_dim(d);
    const double n = norm(inward_normal);
    if (!(n > 0.0)) throw InvalidInput("inward normal must be nonzero");
    const Point nu = (1.0 / n) * inward_normal;
    BoundaryFrame f;
    f.z = z;
    const Frame t = Frame::around(nu, d);
    if (d == 2) f.basis[0] = t.t1;
    if (d == 3) {
        f.basis[0] = t.t1;
        f.basis[1] = t.t2;
    }
    f.basis[d - 1] = nu;
    return f;
}

Point BoundaryFrame::to_local(const Point& p, int d) const {
    Point out{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) out[i] = dot(basis[i], p - z);
    return out;
}

Point BoundaryFrame::to_world(const Point& local, int d) const {
    Point out = z;
    for (int i = 0; i < d; ++i) out = out + local[i] * basis[i];
    return out;
}

DomainOracle DomainOracle::ball(int d, int boundary_points) {
    check_dim(d);
    if (boundary_points < 1) throw InvalidInput("ball oracle needs at least one boundary point");
    DomainOracle o;
    o.name_ = "ball";
    o.d_ = d;
    o.inside_ = [](const Point& p) { return norm(p) < 1.0; };
    o.distance_ = [](const Point& p) { return std::abs(1.0 - norm(p)); };
    o.exact_distance_ = true;
    for (const Point& z : sphere_points(d, boundary_points)) o.frames_.push_back(BoundaryFrame::from_normal(z, -1.0 * z, d));
    return o;
}

DomainOracle DomainOracle::half_space(int d) {
    check_dim(d);
    DomainOracle o;
    o.name_ = "half_space";
    o.d_ = d;
    o.inside_ = [d](const Point& p) { return p[d - 1] > 0.0; };
    o.distance_ = [d](const Point& p) { return std::abs(p[d - 1]); };
    o.exact_distance_ = true;
    o.frames_.push_back(BoundaryFrame::from_normal({0.0, 0.0, 0.0}, unit(d - 1), d));
    return o;
}

DomainOracle DomainOracle::cusp(int d, double beta) {
    check_dim(d);
    if (!(beta > 0.0)) throw InvalidInput("cusp exponent must be positive");
    DomainOracle o;
    o.name_ = "cusp";
    o.d_ = d;
    o.inside_ = [d, beta](const Point& p) { return p[d - 1] > -std::pow(tangential_norm(p, d), beta); };
    // Sampled: minimum distance to the profile x_d = -r^beta over a radial grid.
    o.distance_ = [d, beta](const Point& p) {
        const double r0 = tangential_norm(p, d);
        const double h = p[d - 1];
        double best = std::hypot(r0, h);
        constexpr int n = 4000;
        for (int i = 1; i <= n; ++i) {
            const double r = 4.0 * std::pow(static_cast<double>(i) / n, 3.0);
            best = std::min(best, std::hypot(r - r0, h + std::pow(r, beta)));
        }
        return best;
    };
    o.exact_distance_ = false;
    o.frames_.push_back(BoundaryFrame::from_normal({0.0, 0.0, 0.0}, unit(d - 1), d));
    return o;
}

DomainOracle DomainOracle::custom(std::string name, int d, std::function<bool(const Point&)> inside,
                                  std::vector<BoundaryFrame> frames, std::function<double(const Point&)> distance) {
    check_dim(d);
    if (!inside) throw InvalidInput("custom domain needs a membership function");
    DomainOracle o;
    o.name_ = std::move(name);
    o.d_ = d;
    o.inside_ = std::move(inside);
    o.frames_ = std::move(frames);
    o.distance_ = distance ? std::move(distance) : [](const Point&) { return std::numeric_limits<double>::quiet_NaN(); };
    return o;
}

const BoundaryFrame* DomainOracle::frame_at(const Point& z) const {
    for (const BoundaryFrame& f : frames_)
        if (distance(f.z, z) <= 1e-12) return &f;
    return nullptr;
}

bool Paraboloid::contains(const Point& local, int d) const {
    const double r = tangential_norm(local, d);
    const double h = local[d - 1];
    return h > -depth && h < -r * omega(r);
}

std::vector<Point> paraboloid_samples(const Paraboloid& P, int d, std::size_t samples, std::uint64_t seed) {
    check_dim(d);
    if (!(P.depth > 0.0)) throw InvalidInput("paraboloid depth must be positive");
    P.omega.require_modulus("paraboloid");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(samples);
    std::size_t attempts = 0;
    while (out.size() < samples && attempts < 20 * samples + 100) {
        ++attempts;
        Point local{0.0, 0.0, 0.0};
        double r = 0.0;
        if (d > 1) {
            r = std::pow(10.0, -6.0 * unif(rng));
            Point dir{0.0, 0.0, 0.0};
            double len = 0.0;
            while (len < 1e-12) {
                for (int i = 0; i + 1 < d; ++i) dir[i] = normal(rng);
                len = tangential_norm(dir, d);
            }
            for (int i = 0; i + 1 < d; ++i) local[i] = r * dir[i] / len;
        }
        const double top = -r * P.omega(r);
        if (!(top > -P.depth)) continue;
        const double span = top + P.depth;
        const double v = unif(rng);
        // Alternate between uniform depth and points hugging the upper surface.
        const double offset = out.size() % 2 == 0 ? span * v : span * std::pow(10.0, -6.0 * v);
        local[d - 1] = top - offset;
        if (!P.contains(local, d)) continue;
        out.push_back(local);
    }
    return out;
}

ExteriorDiniCheck check_exterior_dini(const DomainOracle& domain, const Point& z, const Paraboloid& P,
                                      std::size_t samples, std::uint64_t seed, Execution mode) {
    const BoundaryFrame* frame = domain.frame_at(z);
    if (!frame) throw InvalidInput("no boundary frame listed at the requested point of domain " + domain.name());
    const int d = domain.dim();
    const std::vector<Point> pts = paraboloid_samples(P, d, samples, seed);
    std::vector<char> bad(pts.size(), 0);
    for_each_index(
        pts.size(), [&](std::size_t i) { bad[i] = domain.inside(frame->to_world(pts[i], d)) ? 1 : 0; }, mode);
    ExteriorDiniCheck res;
    res.samples_checked = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (bad[i]) {
            res.holds_on_samples = false;
            res.witness = frame->to_world(pts[i], d);
            break;
        }
    }
    return res;
}

DiniClassResult check_dini_class(const ModulusFunction& omega, double s, DiniVariant variant) {
    omega.require_modulus("check_dini_class");
    DiniClassResult res;
    if (variant == DiniVariant::plain) {
        res.report = dini_integral(omega);
    } else {
        if (!(s > 0.0 && s < 1.0)) throw InvalidInput("order s must lie in (0, 1)");
        res.report = dini_integral(ModulusFunction::raised(omega, 2.0 * s));
    }
    res.satisfied = res.report.convergent();
    return res;
}

}  // namespace fraclab
