#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dtmsig/analytic.hpp"
#include "dtmsig/measure_space.hpp"

namespace dtmsig {

/// Noisy planar spiral: (R sin(vR) + s N, R cos(vR) + s N'), R ~ U(0,1).
struct SpiralSpec {
    double v = 10.0;
    double sigma = 0.03;
};

struct UniformShapeSpec {
    UniformShape shape;
};

/// One of the two weighted 9-vertex graphs with equal DTM-signatures.
struct GraphSpec {
    enum class Which { mu, nu } which = Which::mu;
};

/// Isotropic Gaussian mixture in R^d.
struct GaussianMixtureSpec {
    std::vector<std::vector<double>> means;
    std::vector<double> sigmas;
    std::vector<double> weights;
};

using GeneratorKind = std::variant<SpiralSpec, UniformShapeSpec, GraphSpec, GaussianMixtureSpec>;

struct GeneratorSpec {
    GeneratorKind kind;
    std::size_t size = 1;  // ignored for graphs (always 9 vertices)
    std::uint64_t seed = 0;
};

/// Draws the sample described by `spec`; identical specs give bit-identical spaces.
FiniteMeasureSpace sample(const GeneratorSpec& spec);

/// Deterministic spiral map for given radius and noise draws.
std::array<double, 2> spiral_point(double v, double radius, double noise_x, double noise_y, double sigma);

/// The two graphs: clusters of three vertices, distance 1 inside a cluster and 2 across.
std::pair<FiniteMeasureSpace, FiniteMeasureSpace> graph_pair();

/// Vertex masses in cluster order for either graph.
std::array<double, 9> graph_weights(GraphSpec::Which which);

/// Parses "spiral:v=10,sigma=0.03", "ball:d=2,r=1", "cube:d=2,side=1",
/// "annulus:d=2,r1=0.5,r2=1", "graph:mu" / "graph:nu" and
/// "mixture:means=0/0;3/0,sigma=0.5,weights=0.5/0.5" (sigma may list one value per component).
GeneratorKind parse_generator(std::string_view text);
std::string describe(const GeneratorKind& kind);

}  // namespace dtmsig
