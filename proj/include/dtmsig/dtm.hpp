#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dtmsig/kdtree.hpp"
#include "dtmsig/measure_space.hpp"

namespace dtmsig {

/// DTM values at a batch of query points for one mass parameter.
struct DTMField {
    std::vector<double> values;
    double mass = 0.0;
    std::size_t source_size = 0;  // N of the measure the DTM is taken against
};

/// A distance from the query paired with the weight of the support point at that distance.
struct WeightedDistance {
    double distance;
    double weight;
};

/// Throws std::invalid_argument unless m is in (0, 1].
void check_mass(double m);

/// delta_{mu,l}(x): smallest radius whose closed ball carries weight strictly above l.
double pseudo_distance_at(const FiniteMeasureSpace& space, std::size_t query, double l);
double pseudo_distance_at(const FiniteMeasureSpace& space, std::span<const double> query, double l);

/// d_{mu,m}(x) = (1/m) * integral_0^m delta_{mu,l}(x) dl, evaluated exactly.
double dtm_at(const FiniteMeasureSpace& space, std::size_t query, double m);
double dtm_at(const FiniteMeasureSpace& space, std::span<const double> query, double m);

/// DTM at every support point of `space`, each point counting itself at distance 0.
DTMField dtm_field(const FiniteMeasureSpace& space, double m, unsigned threads = 1);

/// Exact integral of the pseudo-distance over [0, m] divided by m. `sorted`
/// must be ordered by (distance, weight); equal distances form one segment.
double dtm_from_sorted(std::span<const WeightedDistance> sorted, double m);

/// Number of nearest neighbours k when m*N is an integer, 0 otherwise.
std::size_t integral_neighbour_count(std::size_t n, double m);

/// Reusable evaluator over one space. Coordinate spaces with d <= 16 use an
/// exact k-d tree; everything else scans all support points. Both paths
/// return bitwise identical values. The space must outlive the evaluator.
class DtmEvaluator {
public:
    static constexpr std::size_t kMaxTreeDimension = 16;

    explicit DtmEvaluator(const FiniteMeasureSpace& space);

    double at(std::size_t query, double m) const;
    double at(std::span<const double> query, double m) const;
    /// Values at every support point.
    DTMField field(double m, unsigned threads = 1) const;
    /// Values at arbitrary row-major query points.
    std::vector<double> at_points(std::span<const double> queries, double m, unsigned threads = 1) const;

    bool uses_tree() const noexcept { return tree_ != nullptr; }

private:
    double eval_coords(std::span<const double> q, double m) const;

    const FiniteMeasureSpace& space_;
    std::unique_ptr<KdTree> tree_;
};

}  // namespace dtmsig
