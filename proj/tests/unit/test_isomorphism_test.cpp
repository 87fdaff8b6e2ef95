#include "doctest.h"

#include <cmath>
#include <random>

#include "dtmsig/isomorphism_test.hpp"
#include "dtmsig/random.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace dtmsig;

namespace {

FiniteMeasureSpace spiral(double v, std::size_t n, std::uint64_t seed) {
    return sample({SpiralSpec{v, 0.03}, n, seed});
}

TestParams small_params(std::uint64_t seed = 1) {
    TestParams p;
    p.m = 0.05;
    p.n = 20;
    p.n_mc = 200;
    p.seed = seed;
    return p;
}

}  // namespace

TEST_CASE("statistic on identical and dilated data") {
    const auto p = FiniteMeasureSpace::from_coordinates({0, 1, 3}, 1);
    const auto q = FiniteMeasureSpace::from_coordinates({0, 2, 6}, 1);
    const auto all = SubsampleIndex::all(3);
    CHECK(test_statistic(p, p, all, all, 2.0 / 3.0) == 0.0);
    CHECK(test_statistic(p, q, all, all, 2.0 / 3.0) == doctest::Approx(std::sqrt(3.0) * 2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(test_statistic(p, q, SubsampleIndex({0}, 3), all, 0.5), std::invalid_argument);
}

TEST_CASE("statistic vanishes between isometric copies with matching subsamples") {
    std::mt19937_64 rng(3);
    const auto s = spiral(10, 300, 5);
    const auto c = std::vector<double>(s.coordinates().begin(), s.coordinates().end());
    const auto moved = FiniteMeasureSpace::from_coordinates(oracle::rigid_motion(c, 2, rng), 2);
    const SubsampleIndex sub({1, 4, 9, 16, 25, 36, 49, 64, 81, 100}, 300);
    CHECK(test_statistic(s, moved, sub, sub, 0.05) < 1e-12);
}

TEST_CASE("bootstrap law") {
    const auto p = spiral(10, 200, 1), q = spiral(10, 200, 2);
    auto params = small_params();
    const auto boot = bootstrap_distribution(p, q, params);
    CHECK(boot.size() == 2 * params.n_mc);
    for (double b : boot) CHECK(b >= 0.0);

    params.threads = 3;
    CHECK(bootstrap_distribution(p, q, params) == boot);

    const auto same = FiniteMeasureSpace::from_coordinates(std::vector<double>(50, 1.5), 1);
    params.n = 10;
    const auto flat = bootstrap_distribution(same, q, params);
    for (std::size_t j = 0; j < params.n_mc; ++j) CHECK(flat[j] == 0.0);
}

TEST_CASE("run_test report contract") {
    const auto p = spiral(10, 400, 11), q = spiral(20, 400, 12);
    const auto r = run_test(p, q, small_params(9));
    CHECK(r.boot.size() == 400);
    CHECK(r.reject == (r.statistic >= r.critical_value));
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);
    std::size_t above = 0;
    for (double b : r.boot) above += b >= r.statistic;
    CHECK(r.p_value == static_cast<double>(1 + above) / 401.0);
    CHECK(r.critical_value == empirical_quantile(r.boot, 0.05));
    CHECK(r.params.n == 20);
    CHECK(r.ks.p_value >= 0.0);

    auto threaded = small_params(9);
    threaded.threads = 4;
    const auto r2 = run_test(p, q, threaded);
    CHECK(r2.statistic == r.statistic);
    CHECK(r2.boot == r.boot);
    CHECK(r2.p_value == r.p_value);
    CHECK(r2.ks.statistic == r.ks.statistic);
}

TEST_CASE("run_test on identical data with coinciding values is flagged degenerate") {
    const auto flat = FiniteMeasureSpace::from_coordinates(std::vector<double>(30, 0.0), 1);
    auto params = small_params();
    params.n = 5;
    const auto r = run_test(flat, flat, params);
    CHECK(r.statistic == 0.0);
    CHECK(r.critical_value == 0.0);
    CHECK(r.degenerate);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("parameter validation") {
    const auto p = spiral(10, 30, 1);
    auto params = small_params();
    params.n = 31;
    CHECK_THROWS_AS(run_test(p, p, params), std::invalid_argument);
    params = small_params();
    params.n_mc = 0;
    CHECK_THROWS_AS(run_test(p, p, params), std::invalid_argument);
    params = small_params();
    params.alpha = 1.0;
    CHECK_THROWS_AS(run_test(p, p, params), std::invalid_argument);
    params = small_params();
    params.m = 0.0;
    CHECK_THROWS_AS(run_test(p, p, params), std::invalid_argument);
    params = small_params();
    params.n = 0;
    params.rho = 1.5;
    CHECK(resolve_params(params, 2000, 3000).n == 158);
}

TEST_CASE("KS statistic examples") {
    CHECK(ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{1, 2}).statistic == 0.0);
    CHECK(ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{3, 4}).statistic == 1.0);
    CHECK(ks_two_sample(std::vector<double>{1, 3}, std::vector<double>{2, 4}).statistic == 0.5);
    CHECK(ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{1, 2}).p_value == 1.0);
}

TEST_CASE("Kolmogorov survival function") {
    // Reference values of 1 - K(lambda).
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
    CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
    CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.049485876755377876).epsilon(1e-10));
    CHECK(kolmogorov_survival(2.0) == doctest::Approx(0.0006709252557796953).epsilon(1e-9));
    // The two series agree where they hand over.
    CHECK(std::abs(kolmogorov_survival(std::nextafter(1.0, 0.0)) - kolmogorov_survival(1.0)) < 1e-12);
}

TEST_CASE("KS baseline on spaces") {
    const auto p = spiral(10, 301, 1);
    // The two sides pair points with independent shuffles, so identical inputs give a null draw.
    const auto r = ks_baseline(p, p, 4);
    CHECK(r.statistic < 0.2);
    CHECK(r.p_value > 1e-3);
    const auto q = spiral(10, 301, 1).scaled(3.0);
    CHECK(ks_baseline(p, q, 4).p_value < 1e-6);
    CHECK_THROWS_AS(ks_baseline(FiniteMeasureSpace::from_coordinates({1.0}, 1), p, 1), std::invalid_argument);
}

TEST_CASE("Clopper-Pearson intervals") {
    const auto zero = binomial_estimate(0, 1);
    CHECK(zero.rate == 0.0);
    CHECK(zero.ci_low == 0.0);
    CHECK(zero.ci_high == doctest::Approx(0.975).epsilon(1e-12));
    const auto one = binomial_estimate(1, 1);
    CHECK(one.rate == 1.0);
    CHECK(one.ci_low == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(one.ci_high == 1.0);
    const auto mid = binomial_estimate(50, 1000);
    CHECK(mid.ci_low == doctest::Approx(0.03733).epsilon(1e-3));
    CHECK(mid.ci_high == doctest::Approx(0.06539).epsilon(1e-3));
}

TEST_CASE("subsample recommendation") {
    const auto a = recommend_subsample(2000, 2, Regularity::standard);
    CHECK(a.rho == 1.5);
    CHECK(a.n == 158);
    const auto b = recommend_subsample(2000, 4, Regularity::general);
    CHECK(b.rho == 2.5);
    CHECK(b.n == 20);
    CHECK(recommend_subsample(4, 2, Regularity::general).n == 2);
    CHECK(recommend_subsample(2000, 1, Regularity::general).rho == 1.5);
}

TEST_CASE("level and power estimation plumbing") {
    auto params = small_params(21);
    params.n_mc = 50;
    const auto one = estimate_level_power(SpiralSpec{10, 0.03}, SpiralSpec{10, 0.03}, 200, params, 1);
    CHECK((one.dtm.rate == 0.0 || one.dtm.rate == 1.0));
    CHECK(one.dtm.ci_low <= one.dtm.rate);
    CHECK(one.dtm.ci_high >= one.dtm.rate);
    CHECK(one.p_values.size() == 1);

    const auto a = estimate_level_power(SpiralSpec{10, 0.03}, SpiralSpec{20, 0.03}, 200, params, 6);
    params.threads = 3;
    const auto b = estimate_level_power(SpiralSpec{10, 0.03}, SpiralSpec{20, 0.03}, 200, params, 6);
    CHECK(a.p_values == b.p_values);
    CHECK(a.ks_p_values == b.ks_p_values);
    CHECK(a.dtm.rejections == b.dtm.rejections);
    CHECK_THROWS_AS(estimate_level_power(SpiralSpec{}, SpiralSpec{}, 200, params, 0), std::invalid_argument);
}

TEST_CASE("p-values under the null are roughly uniform at small scale") {
    auto params = small_params(33);
    params.n_mc = 200;
    const auto r = estimate_level_power(SpiralSpec{10, 0.03}, SpiralSpec{10, 0.03}, 300, params, 80);
    std::size_t small = 0;
    for (double p : r.p_values) small += p <= 0.1;
    // 80 draws at level 0.1: expected 8, a generous binomial band.
    CHECK(small <= 20);
}

TEST_CASE("bootstrap export") {
    TempDir dir;
    const auto p = spiral(10, 100, 1);
    auto params = small_params();
    params.n_mc = 3;
    params.n = 10;
    const auto r = run_test(p, p, params, false);
    save_bootstrap(r, dir / "boot.csv");
    std::ifstream in(dir / "boot.csv");
    std::size_t lines = 0;
    std::string first;
    for (std::string l; std::getline(in, l); ++lines)
        if (lines == 0) first = l;
    CHECK(first == "replicate,side,statistic");
    CHECK(lines == 7);
}
