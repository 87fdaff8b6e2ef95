#pragma once

#include <cstddef>
#include <span>

#include "dtmsig/signature.hpp"

namespace dtmsig {

enum class ShapeKind { ball, cube, annulus };

/// Open set in R^d carrying a uniform measure, centred at the origin.
/// Only shapes with closed-form volume, reach and inner-set mass are modelled.
class UniformShape {
public:
    static UniformShape ball(std::size_t dim, double radius);
    /// Axis-aligned cube [-side/2, side/2]^d.
    static UniformShape cube(std::size_t dim, double side);
    static UniformShape annulus(std::size_t dim, double inner_radius, double outer_radius);

    ShapeKind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return dim_; }
    /// Radius, side, or inner radius.
    double size() const noexcept { return p0_; }
    /// Outer radius of an annulus; 0 otherwise.
    double outer() const noexcept { return p1_; }

    double volume() const;
    /// Distance from the boundary to the medial axis. Zero for cubes with d >= 2 (corners).
    double reach() const;
    double diameter() const;
    /// Largest eps for which the inner set O_eps is non-empty.
    double max_inner_offset() const;
    /// mu_O(O_eps): uniform mass of the points at distance >= eps from the boundary.
    double inner_mass(double eps) const;
    bool contains(std::span<const double> x) const;

private:
    UniformShape(ShapeKind k, std::size_t d, double p0, double p1) : kind_(k), dim_(d), p0_(p0), p1_(p1) {}

    ShapeKind kind_;
    std::size_t dim_;
    double p0_, p1_;
};

/// omega_d = pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(std::size_t d);

/// Radius of a ball inside the shape carrying uniform mass m.
double epsilon_m(const UniformShape& shape, double m);

/// Closed-form minimum of the DTM of the uniform measure. Throws
/// std::invalid_argument when the minimising inner set is not guaranteed
/// (epsilon exceeds the reach for balls/annuli, or half the side for cubes).
double dtm_min(const UniformShape& shape, double m);

/// Lower bound on W1 between the true signatures of two uniform measures of
/// possibly different Lebesgue volume. Shapes must share a dimension.
double uniform_volume_lower_bound(const UniformShape& a, const UniformShape& b, double m);

struct Standardness {
    double a;
    double b;
};

/// (a, d) constants with mu(B(x,r)) >= min(1, a r^d) on the support. Needs reach > 0.
Standardness standardness_constant(const UniformShape& shape);

/// |1 - lambda| times the mean of the signature: W1 to its lambda-dilation.
double dilation_distance(const Signature1D& sig, double lambda);

}  // namespace dtmsig
