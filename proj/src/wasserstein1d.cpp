#include "dtmsig/wasserstein1d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dtmsig {

namespace {

constexpr double kQuantileSlack = 1e-12;

void write_real(std::ostream& os, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    os.write(buf, res.ptr - buf);
}

}  // namespace

Discrete1D::Discrete1D(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("Discrete1D: atoms and weights must be non-empty and equally sized");
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(atoms.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i])) throw std::invalid_argument("Discrete1D: non-finite atom");
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("Discrete1D: negative weight");
        sum += weights[i];
        if (weights[i] > 0.0) pairs.emplace_back(atoms[i], weights[i]);
    }
    const double tol = 1e-12 + static_cast<double>(atoms.size()) * std::numeric_limits<double>::epsilon();
    if (!(std::abs(sum - 1.0) <= tol)) throw std::invalid_argument("Discrete1D: weights must sum to 1");
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [x, w] : pairs) {
        if (!atoms_.empty() && atoms_.back() == x) {
            weights_.back() += w;
        } else {
            atoms_.push_back(x);
            weights_.push_back(w);
        }
    }
}

Discrete1D Discrete1D::uniform(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("Discrete1D::uniform: no samples");
    const double w = 1.0 / static_cast<double>(samples.size());
    Discrete1D d(samples, std::vector<double>(samples.size(), w));
    std::sort(samples.begin(), samples.end());
    d.samples_ = std::move(samples);
    return d;
}

double Discrete1D::cdf(double t) const {
    double c = 0.0;
    for (std::size_t i = 0; i < atoms_.size() && atoms_[i] <= t; ++i) c += weights_[i];
    return std::min(c, 1.0);
}

double Discrete1D::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) s += atoms_[i] * weights_[i];
    return s;
}

Discrete1D Discrete1D::scaled(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("Discrete1D::scaled: lambda must be positive");
    Discrete1D d = *this;
    for (double& x : d.atoms_) x *= lambda;
    for (double& x : d.samples_) x *= lambda;
    return d;
}

Discrete1D Discrete1D::shifted(double t) const {
    Discrete1D d = *this;
    for (double& x : d.atoms_) x += t;
    for (double& x : d.samples_) x += t;
    return d;
}

double w1_sweep(const Discrete1D& a, const Discrete1D& b) {
    const auto xa = a.atoms(), wa = a.weights();
    const auto xb = b.atoms(), wb = b.weights();
    std::size_t i = 0, j = 0;
    double fa = 0.0, fb = 0.0;
    double prev = std::min(xa[0], xb[0]);
    double acc = 0.0;
    while (i < xa.size() || j < xb.size()) {
        const double t = std::min(i < xa.size() ? xa[i] : std::numeric_limits<double>::infinity(),
                                  j < xb.size() ? xb[j] : std::numeric_limits<double>::infinity());
        acc += std::abs(fa - fb) * (t - prev);
        if (i < xa.size() && xa[i] == t) fa += wa[i++];
        if (j < xb.size() && xb[j] == t) fb += wb[j++];
        prev = t;
    }
    return acc;
}

double w1_equal_samples(std::span<double> a, std::span<double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("w1_equal_samples: sizes differ or empty");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double w1(const Discrete1D& a, const Discrete1D& b) {
    if (a.from_uniform_samples() && b.from_uniform_samples() && a.sample_count() == b.sample_count()) {
        const std::size_t k = a.sample_count();
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += std::abs(a.samples_[i] - b.samples_[i]);
        return s / static_cast<double>(k);
    }
    return w1_sweep(a, b);
}

double quantile(const Discrete1D& a, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("quantile level must lie in (0,1)");
    const double target = 1.0 - alpha - kQuantileSlack;
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        c += a.weights()[i];
        if (c >= target) return a.atoms()[i];
    }
    return a.atoms().back();
}

double empirical_quantile(std::span<const double> samples, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("quantile level must lie in (0,1)");
    if (samples.empty()) throw std::invalid_argument("empirical_quantile: no samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double k = static_cast<double>(s.size());
    // Smallest count c with c/K >= 1 - alpha.
    auto c = static_cast<std::size_t>(std::ceil((1.0 - alpha) * k - 1e-9));
    c = std::clamp<std::size_t>(c, 1, s.size());
    return s[c - 1];
}

double transport_lp_oracle(const Discrete1D& a, const Discrete1D& b) {
    if (a.size() * b.size() > 10000) throw std::invalid_argument("transport_lp_oracle: instance exceeds the size cap");
    const auto xa = a.atoms(), wa = a.weights();
    const auto xb = b.atoms(), wb = b.weights();
    std::size_t i = 0, j = 0;
    double ra = wa[0], rb = wb[0];
    double cost = 0.0;
    while (i < xa.size() && j < xb.size()) {
        const bool a_exhausted = ra <= rb;
        const bool b_exhausted = rb <= ra;
        const double flow = a_exhausted ? ra : rb;
        cost += flow * std::abs(xa[i] - xb[j]);
        if (a_exhausted) {
            if (++i < xa.size()) ra = wa[i];
        } else {
            ra -= flow;
        }
        if (b_exhausted) {
            if (++j < xb.size()) rb = wb[j];
        } else {
            rb -= flow;
        }
    }
    return cost;
}

void save_discrete(const Discrete1D& a, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "atom,weight\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        write_real(out, a.atoms()[i]);
        out << ',';
        write_real(out, a.weights()[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_sampled_cdf(const Discrete1D& a, const std::filesystem::path& path, std::size_t points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,cdf\n";
    const double lo = a.atoms().front(), hi = a.atoms().back();
    const std::size_t count = (hi > lo && points > 1) ? points : 1;
    std::size_t cursor = 0;
    double c = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
        const double t = count == 1 ? hi : lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(count - 1);
        while (cursor < a.size() && a.atoms()[cursor] <= t) c += a.weights()[cursor++];
        write_real(out, t);
        out << ',';
        write_real(out, std::min(c, 1.0));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dtmsig
