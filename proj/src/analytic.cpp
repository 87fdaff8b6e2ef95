#include "dtmsig/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dtmsig {

namespace {

void check_dim(std::size_t d) {
    if (d == 0) throw std::invalid_argument("shape dimension must be at least 1");
}

void check_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive");
}

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

void check_feasible(const UniformShape& shape, double eps) {
    const bool curved = shape.kind() != ShapeKind::cube;
    const double limit = curved ? shape.reach() : shape.max_inner_offset();
    if (eps > limit)
        throw std::invalid_argument(curved ? "mass too large: epsilon(m) exceeds the reach of the shape"
                                           : "mass too large: epsilon(m) exceeds half the cube side");
}

}  // namespace

UniformShape UniformShape::ball(std::size_t dim, double radius) {
    check_dim(dim);
    check_positive(radius, "ball radius");
    return {ShapeKind::ball, dim, radius, 0.0};
}

UniformShape UniformShape::cube(std::size_t dim, double side) {
    check_dim(dim);
    check_positive(side, "cube side");
    return {ShapeKind::cube, dim, side, 0.0};
}

UniformShape UniformShape::annulus(std::size_t dim, double inner_radius, double outer_radius) {
    check_dim(dim);
    check_positive(inner_radius, "annulus inner radius");
    if (!(outer_radius > inner_radius) || !std::isfinite(outer_radius))
        throw std::invalid_argument("annulus outer radius must exceed the inner radius");
    return {ShapeKind::annulus, dim, inner_radius, outer_radius};
}

double unit_ball_volume(std::size_t d) {
    check_dim(d);
    const double h = 0.5 * static_cast<double>(d);
    return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double UniformShape::volume() const {
    const double d = static_cast<double>(dim_);
    switch (kind_) {
        case ShapeKind::ball: return unit_ball_volume(dim_) * std::pow(p0_, d);
        case ShapeKind::cube: return std::pow(p0_, d);
        case ShapeKind::annulus: return unit_ball_volume(dim_) * (std::pow(p1_, d) - std::pow(p0_, d));
    }
    return 0.0;
}

double UniformShape::reach() const {
    switch (kind_) {
        case ShapeKind::ball: return p0_;
        case ShapeKind::cube: return dim_ == 1 ? 0.5 * p0_ : 0.0;
        case ShapeKind::annulus: return 0.5 * (p1_ - p0_);
    }
    return 0.0;
}

double UniformShape::diameter() const {
    switch (kind_) {
        case ShapeKind::ball: return 2.0 * p0_;
        case ShapeKind::cube: return p0_ * std::sqrt(static_cast<double>(dim_));
        case ShapeKind::annulus: return 2.0 * p1_;
    }
    return 0.0;
}

double UniformShape::max_inner_offset() const {
    switch (kind_) {
        case ShapeKind::ball: return p0_;
        case ShapeKind::cube: return 0.5 * p0_;
        case ShapeKind::annulus: return 0.5 * (p1_ - p0_);
    }
    return 0.0;
}

double UniformShape::inner_mass(double eps) const {
    if (eps < 0.0) throw std::invalid_argument("inner offset must be nonnegative");
    if (eps > max_inner_offset()) return 0.0;
    const double d = static_cast<double>(dim_);
    switch (kind_) {
        case ShapeKind::ball: return std::pow((p0_ - eps) / p0_, d);
        // O_eps is the concentric cube of side (side - 2 eps).
        case ShapeKind::cube: return std::pow((p0_ - 2.0 * eps) / p0_, d);
        case ShapeKind::annulus:
            return (std::pow(p1_ - eps, d) - std::pow(p0_ + eps, d)) / (std::pow(p1_, d) - std::pow(p0_, d));
    }
    return 0.0;
}

bool UniformShape::contains(std::span<const double> x) const {
    if (x.size() != dim_) return false;
    switch (kind_) {
        case ShapeKind::ball: return norm(x) < p0_;
        case ShapeKind::cube:
            for (double v : x)
                if (!(std::abs(v) < 0.5 * p0_)) return false;
            return true;
        case ShapeKind::annulus: {
            const double r = norm(x);
            return r > p0_ && r < p1_;
        }
    }
    return false;
}

double epsilon_m(const UniformShape& shape, double m) {
    check_mass(m);
    return std::pow(m * shape.volume() / unit_ball_volume(shape.dimension()), 1.0 / static_cast<double>(shape.dimension()));
}

double dtm_min(const UniformShape& shape, double m) {
    const double eps = epsilon_m(shape, m);
    check_feasible(shape, eps);
    const double d = static_cast<double>(shape.dimension());
    return d / (d + 1.0) * eps;
}

double uniform_volume_lower_bound(const UniformShape& a, const UniformShape& b, double m) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("shapes must live in the same dimension");
    const double ea = epsilon_m(a, m);
    const double eb = epsilon_m(b, m);
    check_feasible(a, ea);
    check_feasible(b, eb);
    const std::size_t dim = a.dimension();
    const double d = static_cast<double>(dim);
    const double inner = std::min(a.inner_mass(ea), b.inner_mass(eb));
    const double gap = std::abs(std::pow(a.volume(), 1.0 / d) - std::pow(b.volume(), 1.0 / d));
    return inner * d / (d + 1.0) * std::pow(m / unit_ball_volume(dim), 1.0 / d) * gap;
}

Standardness standardness_constant(const UniformShape& shape) {
    const double reach = shape.reach();
    if (!(reach > 0.0)) throw std::invalid_argument("standardness constant needs a shape with positive reach");
    const double d = static_cast<double>(shape.dimension());
    const double a = unit_ball_volume(shape.dimension()) / shape.volume() * std::pow(reach / shape.diameter(), d);
    return {a, d};
}

double dilation_distance(const Signature1D& sig, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("dilation factor must be positive");
    return std::abs(1.0 - lambda) * sig.dist.mean();
}

}  // namespace dtmsig
