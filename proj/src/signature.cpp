#include "dtmsig/signature.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dtmsig {

DtmCache::DtmCache(const FiniteMeasureSpace& space, double m, unsigned threads)
    : mass_(m), values_(DtmEvaluator(space).field(m, threads).values) {
    rank_order_.resize(values_.size());
    std::iota(rank_order_.begin(), rank_order_.end(), std::size_t{0});
    std::sort(rank_order_.begin(), rank_order_.end(), [&](std::size_t a, std::size_t b) {
        return values_[a] < values_[b] || (values_[a] == values_[b] && a < b);
    });
    sorted_values_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) sorted_values_[i] = values_[rank_order_[i]];
}

Signature1D DtmCache::full(const FiniteMeasureSpace& space) const {
    if (space.size() != size()) throw std::invalid_argument("DtmCache::full: space does not match the cache");
    auto dist = space.uniform() ? Discrete1D::uniform(values_)
                                : Discrete1D(values_, std::vector<double>(space.weights().begin(), space.weights().end()));
    return {std::move(dist), mass_, size(), size()};
}

Signature1D DtmCache::subsample(const SubsampleIndex& sub) const {
    if (sub.parent_size() != size()) throw std::invalid_argument("subsample does not index this space");
    if (sub.size() == 0) throw std::invalid_argument("empty subsample");
    std::vector<double> vals;
    vals.reserve(sub.size());
    for (auto i : sub.indices()) vals.push_back(values_[i]);
    return {Discrete1D::uniform(std::move(vals)), mass_, size(), sub.size()};
}

Signature1D signature_full(const FiniteMeasureSpace& space, double m, unsigned threads) {
    return DtmCache(space, m, threads).full(space);
}

Signature1D signature_subsample(const FiniteMeasureSpace& space, const SubsampleIndex& sub, double m) {
    check_mass(m);
    if (sub.parent_size() != space.size()) throw std::invalid_argument("subsample does not index this space");
    if (sub.size() == 0) throw std::invalid_argument("empty subsample");
    const DtmEvaluator eval(space);
    std::vector<double> vals;
    vals.reserve(sub.size());
    for (auto i : sub.indices()) vals.push_back(eval.at(i, m));
    return {Discrete1D::uniform(std::move(vals)), m, space.size(), sub.size()};
}

void save_signature(const Signature1D& sig, const std::filesystem::path& path) { save_discrete(sig.dist, path); }

void save_signature_cdf(const Signature1D& sig, const std::filesystem::path& path, std::size_t points) {
    save_sampled_cdf(sig.dist, path, points);
}

}  // namespace dtmsig
