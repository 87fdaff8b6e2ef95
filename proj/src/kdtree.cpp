#include "dtmsig/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "dtmsig/measure_space.hpp"

namespace dtmsig {

namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

}  // namespace

KdTree::KdTree(std::span<const double> coords, std::size_t dim, std::size_t leaf_size)
    : dim_(dim), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
    if (dim == 0 || coords.size() % dim != 0) throw std::invalid_argument("KdTree: bad coordinate buffer");
    const std::size_t n = coords.size() / dim;
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    pts_.assign(coords.begin(), coords.end());
    if (n > 0) {
        nodes_.reserve(2 * (n / leaf_size_ + 1));
        build(0, n);
    }
    // Lay points out in tree order so leaves scan contiguous memory.
    std::vector<double> reordered(n * dim);
    for (std::size_t s = 0; s < n; ++s)
        std::copy_n(coords.begin() + order_[s] * dim, dim, reordered.begin() + s * dim);
    pts_ = std::move(reordered);
}

int KdTree::build(std::size_t lo, std::size_t hi) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{lo, hi, 0, 0.0});
    if (hi - lo <= leaf_size_) return id;

    std::size_t axis = 0;
    double best_spread = -1.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        double mn = pts_[order_[lo] * dim_ + k], mx = mn;
        for (std::size_t s = lo + 1; s < hi; ++s) {
            const double v = pts_[order_[s] * dim_ + k];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mx - mn > best_spread) {
            best_spread = mx - mn;
            axis = k;
        }
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    auto key = [&](std::size_t idx) { return pts_[idx * dim_ + axis]; };
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
    const double split = key(order_[mid]);
    const int left = build(lo, mid);
    const int right = build(mid, hi);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double KdTree::dist(std::span<const double> q, std::size_t slot) const noexcept {
    return euclidean(q, {pts_.data() + slot * dim_, dim_});
}

std::vector<Neighbor> KdTree::nearest(std::span<const double> query, std::size_t k) const {
    if (query.size() != dim_) throw std::invalid_argument("KdTree: query dimension mismatch");
    k = std::min(k, size());
    std::vector<Neighbor> heap;
    if (k == 0) return heap;
    heap.reserve(k + 1);
    auto worse = [](const Neighbor& a, const Neighbor& b) { return closer(a, b); };

    auto visit = [&](auto&& self, int id) -> void {
        const Node& nd = nodes_[id];
        if (nd.left < 0) {
            for (std::size_t s = nd.lo; s < nd.hi; ++s) {
                Neighbor cand{dist(query, s), order_[s]};
                if (heap.size() < k) {
                    heap.push_back(cand);
                    std::push_heap(heap.begin(), heap.end(), worse);
                } else if (closer(cand, heap.front())) {
                    std::pop_heap(heap.begin(), heap.end(), worse);
                    heap.back() = cand;
                    std::push_heap(heap.begin(), heap.end(), worse);
                }
            }
            return;
        }
        const double diff = query[nd.axis] - nd.split;
        const int near = diff < 0.0 ? nd.left : nd.right;
        const int far = diff < 0.0 ? nd.right : nd.left;
        self(self, near);
        if (heap.size() < k || std::abs(diff) <= heap.front().distance) self(self, far);
    };
    visit(visit, 0);
    std::sort(heap.begin(), heap.end(), closer);
    return heap;
}

std::vector<Neighbor> KdTree::within(std::span<const double> query, double radius) const {
    if (query.size() != dim_) throw std::invalid_argument("KdTree: query dimension mismatch");
    std::vector<Neighbor> out;
    if (size() == 0) return out;
    auto visit = [&](auto&& self, int id) -> void {
        const Node& nd = nodes_[id];
        if (nd.left < 0) {
            for (std::size_t s = nd.lo; s < nd.hi; ++s) {
                const double d = dist(query, s);
                if (d <= radius) out.push_back({d, order_[s]});
            }
            return;
        }
        const double diff = query[nd.axis] - nd.split;
        if (-diff <= radius) self(self, nd.right);
        if (diff <= radius) self(self, nd.left);
    };
    visit(visit, 0);
    std::sort(out.begin(), out.end(), closer);
    return out;
}

}  // namespace dtmsig
