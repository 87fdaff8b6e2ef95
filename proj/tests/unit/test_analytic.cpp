#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dtmsig/analytic.hpp"
#include "dtmsig/synth.hpp"

using namespace dtmsig;

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
}

TEST_CASE("shape geometry") {
    const auto disc = UniformShape::ball(2, 1.0);
    CHECK(disc.reach() == 1.0);
    CHECK(disc.diameter() == 2.0);
    const auto seg = UniformShape::cube(1, 1.0);
    CHECK(seg.volume() == 1.0);
    CHECK(seg.reach() == 0.5);
    const auto sq = UniformShape::cube(2, 2.0);
    CHECK(sq.reach() == 0.0);
    CHECK(sq.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
    const auto ann = UniformShape::annulus(2, 1.0, 2.0);
    CHECK(ann.volume() == doctest::Approx(3.0 * std::numbers::pi));
    CHECK(ann.reach() == 0.5);
    CHECK(ann.diameter() == 4.0);
    CHECK_THROWS_AS(UniformShape::ball(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformShape::annulus(2, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformShape::cube(2, -1.0), std::invalid_argument);
}

TEST_CASE("epsilon_m") {
    CHECK(epsilon_m(UniformShape::ball(2, 1.0), 0.09) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(epsilon_m(UniformShape::ball(3, 1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(epsilon_m(UniformShape::cube(1, 1.0), 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(epsilon_m(UniformShape::ball(2, 1.0), 1.5), std::invalid_argument);
}

TEST_CASE("dtm_min") {
    CHECK(dtm_min(UniformShape::ball(2, 1.0), 0.09) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(dtm_min(UniformShape::cube(1, 1.0), 0.5) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(dtm_min(UniformShape::ball(2, 1.0), 1e-12) < 1e-6);
    CHECK(dtm_min(UniformShape::ball(2, 1.0), 0.1) == doctest::Approx(2.0 / 3.0 * std::sqrt(0.1)).epsilon(1e-14));
    // An annulus of width 1 cannot host a ball of mass 0.9.
    CHECK_THROWS_AS(dtm_min(UniformShape::annulus(2, 1.0, 2.0), 0.9), std::invalid_argument);
}

TEST_CASE("volume lower bound") {
    const auto a = UniformShape::ball(2, 1.0), b = UniformShape::ball(2, 2.0);
    CHECK(uniform_volume_lower_bound(a, a, 0.01) == 0.0);
    // eps = 0.1 r for both discs, inner mass 0.81, |sqrt(pi) - sqrt(4 pi)| * sqrt(0.01/pi) = 0.1
    CHECK(uniform_volume_lower_bound(a, b, 0.01) == doctest::Approx(0.81 * (2.0 / 3.0) * 0.1).epsilon(1e-13));
    CHECK(uniform_volume_lower_bound(b, a, 0.01) == uniform_volume_lower_bound(a, b, 0.01));
    CHECK(uniform_volume_lower_bound(a, b, 1.0) == 0.0);  // eps reaches the radius: empty inner sets
    CHECK_THROWS_AS(uniform_volume_lower_bound(UniformShape::annulus(2, 1.0, 2.0), UniformShape::annulus(2, 1.0, 3.0), 0.9),
                    std::invalid_argument);
    CHECK_THROWS_AS(uniform_volume_lower_bound(a, UniformShape::ball(3, 1.0), 0.01), std::invalid_argument);
}

TEST_CASE("standardness constants") {
    const auto disc = standardness_constant(UniformShape::ball(2, 1.0));
    CHECK(disc.a == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(disc.b == 2.0);
    const auto seg = standardness_constant(UniformShape::cube(1, 1.0));
    CHECK(seg.a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(seg.b == 1.0);
    // The volume factor makes a scale as r^-d; the reach/diameter ratio alone is scale free.
    CHECK(standardness_constant(UniformShape::ball(2, 7.5)).a == doctest::Approx(0.25 / (7.5 * 7.5)).epsilon(1e-14));
    CHECK_THROWS_AS(standardness_constant(UniformShape::cube(2, 1.0)), std::invalid_argument);
}

TEST_CASE("empirical samples respect the standardness bound") {
    for (const auto& shape : {UniformShape::ball(2, 1.0), UniformShape::cube(1, 1.0), UniformShape::annulus(2, 1.0, 2.0)}) {
        const std::size_t n = 1500;
        const auto s = sample({UniformShapeSpec{shape}, n, 3});
        const auto [a, b] = standardness_constant(shape);
        const double slack = 3.0 * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
        std::size_t violations = 0, pairs = 0;
        for (std::size_t i = 0; i < n; i += 15)
            for (double r : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
                std::size_t inside = 0;
                for (std::size_t j = 0; j < n; ++j) inside += s.distance(i, j) <= r;
                const double mass = static_cast<double>(inside) / static_cast<double>(n);
                violations += mass < std::min(1.0, a * std::pow(r, b)) - slack;
                ++pairs;
            }
        CHECK(violations == 0);
        CHECK(pairs > 0);
    }
}

TEST_CASE("dilation distance") {
    const Signature1D sig{Discrete1D({0.5, 1.0}, {2.0 / 3.0, 1.0 / 3.0}), 2.0 / 3.0, 3, 3};
    CHECK(dilation_distance(sig, 1.0) == 0.0);
    CHECK(dilation_distance(sig, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double lambda : {0.25, 0.5, 2.0, 3.0, 10.0})
        CHECK(std::abs(dilation_distance(sig, lambda) - w1(sig.dist, sig.dist.scaled(lambda))) < 1e-12);
    CHECK_THROWS_AS(dilation_distance(sig, 0.0), std::invalid_argument);
}
