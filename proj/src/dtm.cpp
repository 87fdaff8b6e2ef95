#include "dtmsig/dtm.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "dtmsig/parallel.hpp"

namespace dtmsig {

namespace {

bool canonical_less(const WeightedDistance& a, const WeightedDistance& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.weight < b.weight);
}

// Segment integral over a sorted prefix of the distance list. When the prefix
// is not the complete list, returns nullopt if it does not cover mass m.
std::optional<double> segment_integral(std::span<const WeightedDistance> sorted, double m, bool complete) {
    double acc = 0.0;
    double covered = 0.0;
    std::size_t i = 0;
    const std::size_t n = sorted.size();
    while (i < n && covered < m) {
        const double d = sorted[i].distance;
        double group = 0.0;
        std::size_t j = i;
        while (j < n && sorted[j].distance == d) group += sorted[j++].weight;
        double next = covered + group;
        if (j == n && complete) next = std::max(next, m);  // the full list carries unit mass
        acc += d * (std::min(next, m) - covered);
        covered = next;
        i = j;
    }
    if (covered < m) return std::nullopt;
    return acc / m;
}

double pseudo_from_sorted(std::span<const WeightedDistance> sorted, double l) {
    double covered = 0.0;
    std::size_t i = 0;
    const std::size_t n = sorted.size();
    while (i < n) {
        const double d = sorted[i].distance;
        std::size_t j = i;
        while (j < n && sorted[j].distance == d) covered += sorted[j++].weight;
        if (covered > l || j == n) return d;
        i = j;
    }
    return 0.0;
}

void check_level(double l) {
    if (!(l >= 0.0 && l < 1.0)) throw std::invalid_argument("pseudo-distance level must lie in [0,1)");
}

template <typename DistanceFn>
std::vector<WeightedDistance> all_distances(const FiniteMeasureSpace& space, DistanceFn&& dist) {
    std::vector<WeightedDistance> out(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) out[i] = {dist(i), space.weight(i)};
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

double dtm_from_full_list(const FiniteMeasureSpace& space, std::span<const WeightedDistance> sorted, double m) {
    if (space.uniform()) {
        if (const std::size_t k = integral_neighbour_count(space.size(), m); k > 0) {
            double sum = 0.0;
            for (std::size_t i = 0; i < k; ++i) sum += sorted[i].distance;
            return sum / static_cast<double>(k);
        }
    }
    return *segment_integral(sorted, m, true);
}

std::vector<WeightedDistance> row_distances(const FiniteMeasureSpace& space, std::size_t query) {
    if (query >= space.size()) throw std::out_of_range("DTM query index out of range");
    return all_distances(space, [&](std::size_t j) { return space.distance(query, j); });
}

std::vector<WeightedDistance> point_distances(const FiniteMeasureSpace& space, std::span<const double> query) {
    if (!space.has_coordinates()) throw std::invalid_argument("point queries need a coordinate-form space");
    if (query.size() != space.dimension()) throw std::invalid_argument("query dimension mismatch");
    return all_distances(space, [&](std::size_t j) { return space.distance_to(query, j); });
}

}  // namespace

void check_mass(double m) {
    if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("mass parameter out of (0,1]");
}

std::size_t integral_neighbour_count(std::size_t n, double m) {
    const double k = m * static_cast<double>(n);
    const double r = std::round(k);
    if (r >= 1.0 && std::abs(k - r) <= 1e-9 * r) return static_cast<std::size_t>(r);
    return 0;
}

double dtm_from_sorted(std::span<const WeightedDistance> sorted, double m) {
    check_mass(m);
    if (sorted.empty()) throw std::invalid_argument("empty distance list");
    return *segment_integral(sorted, m, true);
}

double pseudo_distance_at(const FiniteMeasureSpace& space, std::size_t query, double l) {
    check_level(l);
    return pseudo_from_sorted(row_distances(space, query), l);
}

double pseudo_distance_at(const FiniteMeasureSpace& space, std::span<const double> query, double l) {
    check_level(l);
    return pseudo_from_sorted(point_distances(space, query), l);
}

double dtm_at(const FiniteMeasureSpace& space, std::size_t query, double m) {
    check_mass(m);
    return dtm_from_full_list(space, row_distances(space, query), m);
}

double dtm_at(const FiniteMeasureSpace& space, std::span<const double> query, double m) {
    check_mass(m);
    return dtm_from_full_list(space, point_distances(space, query), m);
}

DTMField dtm_field(const FiniteMeasureSpace& space, double m, unsigned threads) {
    return DtmEvaluator(space).field(m, threads);
}

DtmEvaluator::DtmEvaluator(const FiniteMeasureSpace& space) : space_(space) {
    if (space.has_coordinates() && space.dimension() <= kMaxTreeDimension)
        tree_ = std::make_unique<KdTree>(space.coordinates(), space.dimension());
}

double DtmEvaluator::eval_coords(std::span<const double> q, double m) const {
    const std::size_t n = space_.size();
    if (space_.uniform()) {
        if (const std::size_t k = integral_neighbour_count(n, m); k > 0) {
            const auto nb = tree_->nearest(q, k);
            double sum = 0.0;
            for (const auto& x : nb) sum += x.distance;
            return sum / static_cast<double>(k);
        }
    }
    std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(m * static_cast<double>(n))), 1, n);
    std::vector<WeightedDistance> list;
    while (true) {
        const auto nb = tree_->nearest(q, k);
        // Complete the tie group at the cut-off radius so the prefix is canonical.
        const auto ball = nb.size() == n ? nb : tree_->within(q, nb.back().distance);
        list.resize(ball.size());
        for (std::size_t i = 0; i < ball.size(); ++i) list[i] = {ball[i].distance, space_.weight(ball[i].index)};
        std::sort(list.begin(), list.end(), canonical_less);
        const bool complete = list.size() == n;
        if (auto v = segment_integral(list, m, complete)) return *v;
        k = std::min(n, 2 * k);
    }
}

double DtmEvaluator::at(std::size_t query, double m) const {
    check_mass(m);
    if (!tree_) return dtm_at(space_, query, m);
    return eval_coords(space_.point(query), m);
}

double DtmEvaluator::at(std::span<const double> query, double m) const {
    check_mass(m);
    if (!tree_) return dtm_at(space_, query, m);
    if (query.size() != space_.dimension()) throw std::invalid_argument("query dimension mismatch");
    return eval_coords(query, m);
}

DTMField DtmEvaluator::field(double m, unsigned threads) const {
    check_mass(m);
    DTMField f;
    f.mass = m;
    f.source_size = space_.size();
    f.values.resize(space_.size());
    parallel_for(space_.size(), threads, [&](std::size_t i) { f.values[i] = at(i, m); });
    return f;
}

std::vector<double> DtmEvaluator::at_points(std::span<const double> queries, double m, unsigned threads) const {
    check_mass(m);
    if (!space_.has_coordinates()) throw std::invalid_argument("point queries need a coordinate-form space");
    const std::size_t d = space_.dimension();
    if (queries.size() % d != 0) throw std::invalid_argument("query buffer is not a multiple of the dimension");
    std::vector<double> out(queries.size() / d);
    parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = at(queries.subspan(i * d, d), m); });
    return out;
}

}  // namespace dtmsig
