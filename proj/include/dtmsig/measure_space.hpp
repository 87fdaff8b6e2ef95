#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dtmsig {

enum class Geometry { coordinates, distances };

/// A finite metric-measure space: support points with either Euclidean
/// coordinates or an explicit dissimilarity matrix, carrying a probability
/// weight vector. Immutable once constructed.
class FiniteMeasureSpace {
public:
    /// Row-major N x dim coordinates. Empty `weights` means uniform 1/N.
    static FiniteMeasureSpace from_coordinates(std::vector<double> coords, std::size_t dim,
                                               std::vector<double> weights = {},
                                               std::vector<std::string> labels = {});

    /// Row-major N x N distances. Must be exactly symmetric with a zero diagonal.
    static FiniteMeasureSpace from_distances(std::vector<double> matrix, std::size_t n,
                                             std::vector<double> weights = {},
                                             std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return weights_.size(); }
    /// Ambient dimension for coordinate form, 0 for matrix form.
    std::size_t dimension() const noexcept { return dim_; }
    Geometry geometry() const noexcept { return geometry_; }
    bool has_coordinates() const noexcept { return geometry_ == Geometry::coordinates; }

    std::span<const double> weights() const noexcept { return weights_; }
    double weight(std::size_t i) const { return weights_.at(i); }
    /// True when every weight is bitwise equal (1/N).
    bool uniform() const noexcept { return uniform_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    std::span<const double> coordinates() const;
    std::span<const double> point(std::size_t i) const;
    std::span<const double> distance_row(std::size_t i) const;

    /// Unchecked distance between support points i and j.
    double distance(std::size_t i, std::size_t j) const noexcept;
    /// Euclidean distance from an arbitrary query to support point i (coordinate form only).
    double distance_to(std::span<const double> query, std::size_t i) const noexcept;

    /// Distances multiplied by lambda > 0 (coordinates scaled for coordinate form).
    FiniteMeasureSpace scaled(double lambda) const;
    /// Relabelled copy: new point i is old point perm[i]; weights and labels follow.
    FiniteMeasureSpace permuted(std::span<const std::size_t> perm) const;

private:
    FiniteMeasureSpace() = default;
    void set_weights(std::vector<double> weights);

    Geometry geometry_ = Geometry::coordinates;
    std::size_t dim_ = 0;
    std::vector<double> data_;
    std::vector<double> weights_;
    std::vector<std::string> labels_;
    bool uniform_ = true;
};

/// Distinct indices into a parent space of size `parent_size`.
class SubsampleIndex {
public:
    SubsampleIndex(std::vector<std::size_t> indices, std::size_t parent_size);
    static SubsampleIndex all(std::size_t parent_size);

    std::span<const std::size_t> indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t parent_size() const noexcept { return parent_size_; }

private:
    std::vector<std::size_t> indices_;
    std::size_t parent_size_;
};

double euclidean(std::span<const double> a, std::span<const double> b) noexcept;

/// Checked distance lookup; throws std::out_of_range on a bad index.
double pairwise_distance(const FiniteMeasureSpace& space, std::size_t i, std::size_t j);

/// O(N^3) triangle-inequality check, throws std::invalid_argument on the first violation.
void check_triangle_inequality(const FiniteMeasureSpace& space, double tol = 1e-12);

// CSV ingestion and export. Loaders throw std::runtime_error on I/O or parse failures.

FiniteMeasureSpace load_point_cloud(const std::filesystem::path& path);
FiniteMeasureSpace load_distance_matrix(const std::filesystem::path& path,
                                        const std::optional<std::filesystem::path>& weights_path = {});
std::vector<double> load_weights(const std::filesystem::path& path);

void save_point_cloud(const FiniteMeasureSpace& space, const std::filesystem::path& path);
void save_distance_matrix(const FiniteMeasureSpace& space, const std::filesystem::path& path);
void save_weights(const FiniteMeasureSpace& space, const std::filesystem::path& path);

/// Parses a floating point field with surrounding whitespace; nullopt if not numeric.
std::optional<double> parse_real(std::string_view field);

}  // namespace dtmsig
