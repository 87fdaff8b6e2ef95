#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dtmsig {

/// Purpose tags separating the independent random streams of one run.
enum class StreamTag : std::uint64_t {
    subsample = 1,
    bootstrap_p,
    bootstrap_q,
    ks_p,
    ks_q,
    data_p,
    data_q,
    test,
    ks,
    generator,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-style key derivation: a distinct 64-bit seed for every (seed, tag, index).
std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept;

/// Reproducible random stream. Every stream is addressed by (seed, tag, index),
/// so work split across threads draws identical numbers in any schedule.
/// The bounded-integer and normal transforms are implemented here rather
/// than taken from <random> so output does not depend on the standard library.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(mix64(seed)) {}
    Stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) : engine_(derive_seed(seed, tag, index)) {}

    std::uint64_t bits() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1).
    double uniform_open() {
        double u;
        do u = uniform();
        while (u == 0.0);
        return u;
    }
    /// Uniform integer in [0, n), unbiased (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal deviate (Marsaglia polar method).
    double normal();

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// k distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(Stream& rng, std::size_t n, std::size_t k);

}  // namespace dtmsig
