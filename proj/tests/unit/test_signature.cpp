#include "doctest.h"

#include <random>

#include "dtmsig/analytic.hpp"
#include "dtmsig/signature.hpp"
#include "dtmsig/synth.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace dtmsig;

namespace {

std::vector<double> gaussian_coords(std::mt19937_64& rng, std::size_t n, std::size_t d, double shift = 0.0) {
    std::normal_distribution<double> g;
    std::vector<double> c(n * d);
    for (auto& x : c) x = g(rng) + shift;
    return c;
}

}  // namespace

TEST_CASE("three-point signature") {
    const auto s = FiniteMeasureSpace::from_coordinates({0, 1, 3}, 1);
    const auto sig = signature_full(s, 2.0 / 3.0);
    REQUIRE(sig.dist.size() == 2);
    CHECK(sig.dist.atoms()[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sig.dist.atoms()[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sig.dist.weights()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(sig.source_size == 3);
    CHECK(sig.eval_size == 3);

    const auto sub = signature_subsample(s, SubsampleIndex({0}, 3), 2.0 / 3.0);
    REQUIRE(sub.dist.size() == 1);
    CHECK(sub.dist.atoms()[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sub.dist.weights()[0] == 1.0);
    CHECK(sub.eval_size == 1);

    const auto all = signature_subsample(s, SubsampleIndex::all(3), 2.0 / 3.0);
    CHECK(all.dist == sig.dist);
}

TEST_CASE("single point signature") {
    const auto s = FiniteMeasureSpace::from_coordinates({4.0, 2.0}, 2);
    for (double m : {0.01, 0.5, 1.0}) {
        const auto sig = signature_full(s, m);
        CHECK(sig.dist.size() == 1);
        CHECK(sig.dist.atoms()[0] == 0.0);
    }
}

TEST_CASE("weighted graphs share their signatures") {
    const auto [mu, nu] = graph_pair();
    for (double m : {0.1, 1.0 / 3.0, 0.5, 0.9, 0.05, 0.2, 0.7, 1.0}) {
        const auto a = signature_full(mu, m), b = signature_full(nu, m);
        CHECK(w1(a.dist, b.dist) < 1e-12);
    }
    // The vertex masses differ, so the spaces themselves are not isomorphic by relabelling within clusters.
    CHECK(graph_weights(GraphSpec::Which::mu) != graph_weights(GraphSpec::Which::nu));
}

TEST_CASE("cache matches direct evaluation") {
    std::mt19937_64 rng(7);
    const auto s = FiniteMeasureSpace::from_coordinates(gaussian_coords(rng, 200, 2), 2);
    const DtmCache cache(s, 0.05);
    const auto f = dtm_field(s, 0.05);
    CHECK(std::vector<double>(cache.values().begin(), cache.values().end()) == f.values);
    CHECK(std::is_sorted(cache.sorted_values().begin(), cache.sorted_values().end()));
    const SubsampleIndex sub({5, 17, 3, 199, 42}, 200);
    CHECK(cache.subsample(sub).dist == signature_subsample(s, sub, 0.05).dist);
    CHECK(cache.full(s).dist == signature_full(s, 0.05).dist);
}

TEST_CASE("dilation identity") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 1 + t % 3, n = 10 + 9 * t;
        const auto s = FiniteMeasureSpace::from_coordinates(gaussian_coords(rng, n, d), d);
        const double m = 0.03 + 0.04 * t;
        const auto sig = signature_full(s, m);
        for (double lambda : {0.5, 2.0, 3.0}) {
            const auto sl = signature_full(s.scaled(lambda), m);
            CHECK(std::abs(w1(sig.dist, sl.dist) - std::abs(1.0 - lambda) * sig.dist.mean()) < 1e-9);
            CHECK(std::abs(dilation_distance(sig, lambda) - w1(sig.dist, sl.dist)) < 1e-9);
        }
    }
}

TEST_CASE("isometry invariance of signatures") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 2 + t % 2, n = 80;
        const auto c = gaussian_coords(rng, n, d);
        const auto s = FiniteMeasureSpace::from_coordinates(c, d);
        const auto moved = FiniteMeasureSpace::from_coordinates(oracle::rigid_motion(c, d, rng), d);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto iso = moved.permuted(perm);
        std::vector<std::size_t> inverse(n);
        for (std::size_t i = 0; i < n; ++i) inverse[perm[i]] = i;

        const double m = 0.1;
        const auto a = signature_full(s, m), b = signature_full(iso, m);
        CHECK(w1(a.dist, b.dist) < 1e-12);
        const std::vector<std::size_t> idx{0, 5, 9, 33, 71};
        std::vector<std::size_t> mapped;
        for (auto i : idx) mapped.push_back(inverse[i]);
        const auto sa = signature_subsample(s, SubsampleIndex(idx, n), m);
        const auto sb = signature_subsample(iso, SubsampleIndex(mapped, n), m);
        CHECK(w1(sa.dist, sb.dist) < 1e-12);
    }
}

TEST_CASE("permuted distance matrix gives the identical signature") {
    const auto [mu, nu] = graph_pair();
    const std::vector<std::size_t> perm{8, 3, 5, 0, 1, 7, 2, 6, 4};
    const auto p = mu.permuted(perm);
    for (double m : {0.1, 0.5}) CHECK(signature_full(p, m).dist == signature_full(mu, m).dist);
}

TEST_CASE("stability on the line") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> um(0.02, 1.0);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 5 + t % 40;
        const auto a = gaussian_coords(rng, n, 1), b = gaussian_coords(rng, n, 1, 0.3 * (t % 5));
        const auto P = FiniteMeasureSpace::from_coordinates(a, 1), Q = FiniteMeasureSpace::from_coordinates(b, 1);
        const double m = um(rng);
        const double base = w1(Discrete1D::uniform(a), Discrete1D::uniform(b));
        CHECK(w1(signature_full(P, m).dist, signature_full(Q, m).dist) <= (1.0 + 1.0 / m) * base + 1e-9);
        const DtmEvaluator ep(P), eq(Q);
        double gap = 0.0;
        for (double x : a) gap = std::max(gap, std::abs(ep.at(std::span<const double>(&x, 1), m) - eq.at(std::span<const double>(&x, 1), m)));
        for (double x : b) gap = std::max(gap, std::abs(ep.at(std::span<const double>(&x, 1), m) - eq.at(std::span<const double>(&x, 1), m)));
        CHECK(gap <= base / m + 1e-9);
    }
}

TEST_CASE("stability in the plane against the assignment oracle") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 8 + t;
        const auto a = gaussian_coords(rng, n, 2), b = gaussian_coords(rng, n, 2, 0.5);
        const auto P = FiniteMeasureSpace::from_coordinates(a, 2), Q = FiniteMeasureSpace::from_coordinates(b, 2);
        const double base = oracle::cloud_w1(a, b, 2);
        const double m = 0.25;
        CHECK(w1(signature_full(P, m).dist, signature_full(Q, m).dist) <= (1.0 + 1.0 / m) * base + 1e-9);
        const DtmEvaluator ep(P), eq(Q);
        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gap = std::max(gap, std::abs(ep.at(P.point(i), m) - eq.at(P.point(i), m)));
            gap = std::max(gap, std::abs(ep.at(Q.point(i), m) - eq.at(Q.point(i), m)));
        }
        CHECK(gap <= base / m + 1e-9);
    }
}

TEST_CASE("signature export") {
    TempDir dir;
    const auto s = FiniteMeasureSpace::from_coordinates({0, 1, 3}, 1);
    const auto sig = signature_full(s, 2.0 / 3.0);
    save_signature(sig, dir / "sig.csv");
    save_signature_cdf(sig, dir / "cdf.csv", 5);
    std::ifstream in(dir / "sig.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "atom,weight");
    std::getline(in, line);
    CHECK(line.rfind("0.5,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("1,", 0) == 0);
}

TEST_CASE("spiral signature matches the stored golden curve") {
    // Golden CDF of the v=10 spiral, N=2000, seed 7, m=0.05, sampled at 200 abscissae.
    std::ifstream in(std::string(DTMSIG_TEST_DATA) + "/golden_spiral_v10_m005_cdf.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    const auto sig = signature_full(sample({SpiralSpec{10.0, 0.03}, 2000, 7}), 0.05);
    double sup = 0.0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double t = std::stod(line.substr(0, comma)), f = std::stod(line.substr(comma + 1));
        sup = std::max(sup, std::abs(sig.dist.cdf(t) - f));
        ++rows;
    }
    CHECK(rows == 200);
    CHECK(sup <= 0.02);
}
