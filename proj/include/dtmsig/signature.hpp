#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "dtmsig/dtm.hpp"
#include "dtmsig/measure_space.hpp"
#include "dtmsig/wasserstein1d.hpp"

namespace dtmsig {

/// Empirical DTM-signature: the law of d_{mu_N,m}(X) for X drawn from an
/// evaluation measure (the full space, or a uniform subsample of it).
struct Signature1D {
    Discrete1D dist;
    double mass;
    std::size_t source_size;
    std::size_t eval_size;
};

/// DTM values of every support point against the full measure, computed once
/// and shared read-only by signature, statistic and bootstrap code.
class DtmCache {
public:
    DtmCache(const FiniteMeasureSpace& space, double m, unsigned threads = 1);

    double mass() const noexcept { return mass_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    /// Support indices ordered by DTM value (ties by index).
    std::span<const std::size_t> rank_order() const noexcept { return rank_order_; }
    std::span<const double> sorted_values() const noexcept { return sorted_values_; }

    Signature1D full(const FiniteMeasureSpace& space) const;
    Signature1D subsample(const SubsampleIndex& sub) const;

private:
    double mass_;
    std::vector<double> values_;
    std::vector<std::size_t> rank_order_;
    std::vector<double> sorted_values_;
};

/// Law of the DTM under the space's own weights.
Signature1D signature_full(const FiniteMeasureSpace& space, double m, unsigned threads = 1);

/// DTM against all N points, evaluated only on the subsample with weight 1/n each.
Signature1D signature_subsample(const FiniteMeasureSpace& space, const SubsampleIndex& sub, double m);

void save_signature(const Signature1D& sig, const std::filesystem::path& path);
void save_signature_cdf(const Signature1D& sig, const std::filesystem::path& path, std::size_t points = 200);

}  // namespace dtmsig
