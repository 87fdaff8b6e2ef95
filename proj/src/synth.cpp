#include "dtmsig/synth.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "dtmsig/random.hpp"

namespace dtmsig {

namespace {

constexpr std::size_t kBlock = 1024;

void draw_block(const GeneratorKind& kind, Stream& rng, std::size_t count, std::vector<double>& out) {
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SpiralSpec>) {
                for (std::size_t i = 0; i < count; ++i) {
                    const double r = rng.uniform();
                    const double nx = rng.normal();
                    const double ny = rng.normal();
                    const auto p = spiral_point(g.v, r, nx, ny, g.sigma);
                    out.insert(out.end(), p.begin(), p.end());
                }
            } else if constexpr (std::is_same_v<T, UniformShapeSpec>) {
                const auto& s = g.shape;
                const std::size_t d = s.dimension();
                const double dd = static_cast<double>(d);
                std::vector<double> x(d);
                for (std::size_t i = 0; i < count; ++i) {
                    if (s.kind() == ShapeKind::cube) {
                        for (auto& v : x) v = (rng.uniform_open() - 0.5) * s.size();
                    } else {
                        double nrm;
                        do {
                            nrm = 0.0;
                            for (auto& v : x) {
                                v = rng.normal();
                                nrm += v * v;
                            }
                        } while (nrm == 0.0);
                        nrm = std::sqrt(nrm);
                        const double u = rng.uniform_open();
                        double radius;
                        if (s.kind() == ShapeKind::ball) {
                            radius = s.size() * std::pow(u, 1.0 / dd);
                        } else {
                            const double lo = std::pow(s.size(), dd), hi = std::pow(s.outer(), dd);
                            radius = std::pow(lo + u * (hi - lo), 1.0 / dd);
                        }
                        for (auto& v : x) v *= radius / nrm;
                    }
                    out.insert(out.end(), x.begin(), x.end());
                }
            } else if constexpr (std::is_same_v<T, GaussianMixtureSpec>) {
                const std::size_t d = g.means.front().size();
                for (std::size_t i = 0; i < count; ++i) {
                    const double u = rng.uniform();
                    std::size_t c = 0;
                    double acc = g.weights[0];
                    while (c + 1 < g.weights.size() && u >= acc) acc += g.weights[++c];
                    for (std::size_t k = 0; k < d; ++k) out.push_back(g.means[c][k] + g.sigmas[c] * rng.normal());
                }
            }
        },
        kind);
}

void validate(const GeneratorKind& kind) {
    std::visit(
        [](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SpiralSpec>) {
                if (!std::isfinite(g.v)) throw std::invalid_argument("spiral frequency must be finite");
                if (!(g.sigma >= 0.0) || !std::isfinite(g.sigma)) throw std::invalid_argument("noise sigma must be >= 0");
            } else if constexpr (std::is_same_v<T, GaussianMixtureSpec>) {
                if (g.means.empty()) throw std::invalid_argument("mixture needs at least one component");
                const std::size_t d = g.means.front().size();
                if (d == 0) throw std::invalid_argument("mixture means must be non-empty");
                for (const auto& mu : g.means)
                    if (mu.size() != d) throw std::invalid_argument("mixture means differ in dimension");
                if (g.sigmas.size() != g.means.size() || g.weights.size() != g.means.size())
                    throw std::invalid_argument("mixture needs one sigma and one weight per component");
                double sum = 0.0;
                for (double w : g.weights) {
                    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
                    sum += w;
                }
                if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");
                for (double s : g.sigmas)
                    if (!(s >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
            }
        },
        kind);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double number(const std::map<std::string, std::string>& kv, const std::string& key, std::optional<double> fallback = {}) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        if (fallback) return *fallback;
        throw std::invalid_argument("generator is missing parameter '" + key + "'");
    }
    const auto v = parse_real(it->second);
    if (!v) throw std::invalid_argument("generator parameter '" + key + "' is not a number");
    return *v;
}

std::size_t dimension(const std::map<std::string, std::string>& kv) {
    const double d = number(kv, "d", 2.0);
    if (d < 1.0 || d != std::floor(d)) throw std::invalid_argument("dimension must be a positive integer");
    return static_cast<std::size_t>(d);
}

std::vector<double> number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& f : split(text, '/')) {
        const auto v = parse_real(f);
        if (!v) throw std::invalid_argument("bad number '" + f + "' in generator list");
        out.push_back(*v);
    }
    return out;
}

}  // namespace

std::array<double, 2> spiral_point(double v, double radius, double noise_x, double noise_y, double sigma) {
    return {radius * std::sin(v * radius) + sigma * noise_x, radius * std::cos(v * radius) + sigma * noise_y};
}

std::array<double, 9> graph_weights(GraphSpec::Which which) {
    if (which == GraphSpec::Which::mu)
        return {23.0 / 140, 1.0 / 105, 67.0 / 420, 3.0 / 28, 1.0 / 28, 4.0 / 21, 2.0 / 15, 1.0 / 15, 2.0 / 15};
    return {3.0 / 28, 1.0 / 15, 67.0 / 420, 2.0 / 15, 4.0 / 21, 1.0 / 105, 23.0 / 140, 2.0 / 15, 1.0 / 28};
}

namespace {

FiniteMeasureSpace graph_space(GraphSpec::Which which) {
    std::vector<double> d(81);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) d[i * 9 + j] = i == j ? 0.0 : (i / 3 == j / 3 ? 1.0 : 2.0);
    const auto w = graph_weights(which);
    return FiniteMeasureSpace::from_distances(std::move(d), 9, std::vector<double>(w.begin(), w.end()));
}

}  // namespace

std::pair<FiniteMeasureSpace, FiniteMeasureSpace> graph_pair() {
    return {graph_space(GraphSpec::Which::mu), graph_space(GraphSpec::Which::nu)};
}

FiniteMeasureSpace sample(const GeneratorSpec& spec) {
    validate(spec.kind);
    if (const auto* g = std::get_if<GraphSpec>(&spec.kind)) return graph_space(g->which);
    if (spec.size == 0) throw std::invalid_argument("sample size must be at least 1");

    std::size_t dim = 2;
    if (const auto* u = std::get_if<UniformShapeSpec>(&spec.kind)) dim = u->shape.dimension();
    if (const auto* m = std::get_if<GaussianMixtureSpec>(&spec.kind)) dim = m->means.front().size();

    std::vector<double> coords;
    coords.reserve(spec.size * dim);
    for (std::size_t b = 0; b * kBlock < spec.size; ++b) {
        Stream rng(spec.seed, StreamTag::generator, b);
        draw_block(spec.kind, rng, std::min(kBlock, spec.size - b * kBlock), coords);
    }
    return FiniteMeasureSpace::from_coordinates(std::move(coords), dim);
}

GeneratorKind parse_generator(std::string_view text) {
    const auto colon = text.find(':');
    const std::string kind(text.substr(0, colon));
    const std::string rest = colon == std::string_view::npos ? std::string() : std::string(text.substr(colon + 1));

    if (kind == "graph") {
        if (rest == "mu" || rest.empty()) return GraphSpec{GraphSpec::Which::mu};
        if (rest == "nu") return GraphSpec{GraphSpec::Which::nu};
        throw std::invalid_argument("graph generator expects 'graph:mu' or 'graph:nu'");
    }

    std::map<std::string, std::string> kv;
    if (!rest.empty()) {
        for (const auto& item : split(rest, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("generator parameter '" + item + "' lacks '='");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }

    GeneratorKind out;
    if (kind == "spiral") {
        out = SpiralSpec{number(kv, "v", 10.0), number(kv, "sigma", 0.03)};
    } else if (kind == "ball") {
        out = UniformShapeSpec{UniformShape::ball(dimension(kv), number(kv, "r", 1.0))};
    } else if (kind == "cube") {
        out = UniformShapeSpec{UniformShape::cube(dimension(kv), number(kv, "side", 1.0))};
    } else if (kind == "annulus") {
        out = UniformShapeSpec{UniformShape::annulus(dimension(kv), number(kv, "r1"), number(kv, "r2"))};
    } else if (kind == "mixture") {
        if (!kv.count("means")) throw std::invalid_argument("mixture generator needs means=");
        GaussianMixtureSpec g;
        for (const auto& m : split(kv["means"], ';')) g.means.push_back(number_list(m));
        const std::size_t k = g.means.size();
        g.sigmas = kv.count("sigma") ? number_list(kv["sigma"]) : std::vector<double>{1.0};
        if (g.sigmas.size() == 1) g.sigmas.assign(k, g.sigmas.front());
        g.weights = kv.count("weights") ? number_list(kv["weights"]) : std::vector<double>(k, 1.0 / static_cast<double>(k));
        out = std::move(g);
    } else {
        throw std::invalid_argument("unknown generator kind '" + kind + "'");
    }
    validate(out);
    return out;
}

std::string describe(const GeneratorKind& kind) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SpiralSpec>) {
                os << "spiral:v=" << g.v << ",sigma=" << g.sigma;
            } else if constexpr (std::is_same_v<T, UniformShapeSpec>) {
                const auto& s = g.shape;
                switch (s.kind()) {
                    case ShapeKind::ball: os << "ball:d=" << s.dimension() << ",r=" << s.size(); break;
                    case ShapeKind::cube: os << "cube:d=" << s.dimension() << ",side=" << s.size(); break;
                    case ShapeKind::annulus:
                        os << "annulus:d=" << s.dimension() << ",r1=" << s.size() << ",r2=" << s.outer();
                        break;
                }
            } else if constexpr (std::is_same_v<T, GraphSpec>) {
                os << "graph:" << (g.which == GraphSpec::Which::mu ? "mu" : "nu");
            } else {
                os << "mixture:means=";
                for (std::size_t c = 0; c < g.means.size(); ++c) {
                    if (c) os << ';';
                    for (std::size_t k = 0; k < g.means[c].size(); ++k) os << (k ? "/" : "") << g.means[c][k];
                }
                os << ",sigma=";
                for (std::size_t c = 0; c < g.sigmas.size(); ++c) os << (c ? "/" : "") << g.sigmas[c];
                os << ",weights=";
                for (std::size_t c = 0; c < g.weights.size(); ++c) os << (c ? "/" : "") << g.weights[c];
            }
        },
        kind);
    return os.str();
}

}  // namespace dtmsig
