#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dtmsig {

struct Neighbor {
    double distance;
    std::size_t index;
};

/// Exact k-d tree over a row-major point buffer, Euclidean metric.
/// Reported distances are bitwise identical to dtmsig::euclidean.
class KdTree {
public:
    KdTree(std::span<const double> coords, std::size_t dim, std::size_t leaf_size = 16);

    std::size_t size() const noexcept { return order_.size(); }
    std::size_t dimension() const noexcept { return dim_; }

    /// The k nearest points, ascending by (distance, index). k is clamped to size().
    std::vector<Neighbor> nearest(std::span<const double> query, std::size_t k) const;
    /// Every point with distance <= radius, ascending by (distance, index).
    std::vector<Neighbor> within(std::span<const double> query, double radius) const;

private:
    struct Node {
        std::size_t lo, hi;
        std::size_t axis;
        double split;
        int left = -1, right = -1;
    };

    int build(std::size_t lo, std::size_t hi);
    double dist(std::span<const double> q, std::size_t slot) const noexcept;

    std::size_t dim_;
    std::size_t leaf_size_;
    std::vector<double> pts_;          // reordered copy, slot-major
    std::vector<std::size_t> order_;   // slot -> original index
    std::vector<Node> nodes_;
};

}  // namespace dtmsig
