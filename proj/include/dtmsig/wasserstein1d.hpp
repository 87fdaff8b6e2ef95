#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace dtmsig {

/// Weighted discrete probability distribution on the real line. Atoms are
/// kept sorted and distinct (duplicates merged, weights summed).
class Discrete1D {
public:
    Discrete1D(std::vector<double> atoms, std::vector<double> weights);
    /// Uniform weight 1/K on each sample; repeated values merge.
    static Discrete1D uniform(std::vector<double> samples);

    std::span<const double> atoms() const noexcept { return atoms_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    /// True when built from equally weighted samples; `sample_count` is then their number.
    bool from_uniform_samples() const noexcept { return !samples_.empty(); }
    std::size_t sample_count() const noexcept { return samples_.size(); }

    double cdf(double t) const;
    double mean() const;
    Discrete1D scaled(double lambda) const;
    Discrete1D shifted(double t) const;

    friend bool operator==(const Discrete1D& a, const Discrete1D& b) {
        return a.atoms_ == b.atoms_ && a.weights_ == b.weights_;
    }

private:
    friend double w1(const Discrete1D& a, const Discrete1D& b);
    Discrete1D() = default;

    std::vector<double> atoms_;
    std::vector<double> weights_;
    std::vector<double> samples_;  // sorted originals for uniform inputs
};

/// Exact W1 = integral |F_a - F_b| via a merged sweep over both atom sets.
/// Uses the sorted-pairing closed form when both inputs are uniform samples of equal count.
double w1(const Discrete1D& a, const Discrete1D& b);
/// The CDF sweep alone, without the closed-form fast path.
double w1_sweep(const Discrete1D& a, const Discrete1D& b);
/// Mean |a_(i) - b_(i)| of two equally sized samples, sorting in place.
double w1_equal_samples(std::span<double> a, std::span<double> b);

/// Smallest atom whose cumulative weight reaches 1 - alpha.
double quantile(const Discrete1D& a, double alpha);
/// Same convention on a raw sample of equal weights.
double empirical_quantile(std::span<const double> samples, double alpha);

/// North-west-corner coupling on sorted atoms; optimal for convex costs on R.
/// Test reference only: refuses inputs with K_a * K_b > 10^4.
double transport_lp_oracle(const Discrete1D& a, const Discrete1D& b);

void save_discrete(const Discrete1D& a, const std::filesystem::path& path);
/// (t, F(t)) on `points` evenly spaced abscissae spanning the atoms.
void save_sampled_cdf(const Discrete1D& a, const std::filesystem::path& path, std::size_t points = 200);

}  // namespace dtmsig
