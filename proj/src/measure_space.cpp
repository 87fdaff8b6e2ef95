#include "dtmsig/measure_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dtmsig {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kLoadAsymmetryTol = 1e-9;
constexpr double kSymmetryTol = 1e-12;
constexpr double kDiagonalTol = 1e-12;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

struct CsvRows {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvRows read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvRows out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> row;
        for (auto f : split_fields(line)) row.emplace_back(f);
        out.rows.push_back(std::move(row));
        out.line_numbers.push_back(lineno);
    }
    return out;
}

std::string where(const std::filesystem::path& path, std::size_t lineno) {
    return path.string() + ":" + std::to_string(lineno);
}

std::vector<double> normalized(std::vector<double> w, const std::string& context) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw std::runtime_error(context + ": negative or non-finite weight");
        sum += x;
    }
    if (!(sum > 0.0)) throw std::runtime_error(context + ": weights sum to zero");
    for (double& x : w) x /= sum;
    return w;
}

void write_real(std::ostream& os, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    os.write(buf, res.ptr - buf);
}

}  // namespace

std::optional<double> parse_real(std::string_view field) {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

FiniteMeasureSpace FiniteMeasureSpace::from_coordinates(std::vector<double> coords, std::size_t dim,
                                                        std::vector<double> weights,
                                                        std::vector<std::string> labels) {
    if (dim == 0) throw std::invalid_argument("coordinate dimension must be at least 1");
    if (coords.empty() || coords.size() % dim != 0)
        throw std::invalid_argument("coordinate buffer is empty or not a multiple of the dimension");
    for (double x : coords)
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite coordinate");
    FiniteMeasureSpace s;
    s.geometry_ = Geometry::coordinates;
    s.dim_ = dim;
    const std::size_t n = coords.size() / dim;
    s.data_ = std::move(coords);
    if (weights.empty()) weights.assign(n, 1.0 / static_cast<double>(n));
    if (weights.size() != n) throw std::invalid_argument("weight count does not match point count");
    s.set_weights(std::move(weights));
    if (!labels.empty() && labels.size() != n) throw std::invalid_argument("label count does not match point count");
    s.labels_ = std::move(labels);
    return s;
}

FiniteMeasureSpace FiniteMeasureSpace::from_distances(std::vector<double> matrix, std::size_t n,
                                                      std::vector<double> weights,
                                                      std::vector<std::string> labels) {
    if (n == 0 || matrix.size() != n * n) throw std::invalid_argument("distance matrix must be N x N with N >= 1");
    for (std::size_t i = 0; i < n; ++i) {
        double& diag = matrix[i * n + i];
        if (!(std::abs(diag) <= kDiagonalTol)) throw std::invalid_argument("distance matrix has a nonzero diagonal");
        diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix[i * n + j];
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("distance matrix has a negative or non-finite entry");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            double& a = matrix[i * n + j];
            double& b = matrix[j * n + i];
            if (!(std::abs(a - b) <= kSymmetryTol)) throw std::invalid_argument("distance matrix is not symmetric");
            if (a != b) a = b = 0.5 * (a + b);
        }
    }
    FiniteMeasureSpace s;
    s.geometry_ = Geometry::distances;
    s.dim_ = 0;
    s.data_ = std::move(matrix);
    if (weights.empty()) weights.assign(n, 1.0 / static_cast<double>(n));
    if (weights.size() != n) throw std::invalid_argument("weight count does not match point count");
    s.set_weights(std::move(weights));
    if (!labels.empty() && labels.size() != n) throw std::invalid_argument("label count does not match point count");
    s.labels_ = std::move(labels);
    return s;
}

void FiniteMeasureSpace::set_weights(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
        sum += w;
    }
    // Allow for accumulated rounding in long weight vectors.
    const double tol = kWeightSumTol + static_cast<double>(weights.size()) * std::numeric_limits<double>::epsilon();
    if (!(std::abs(sum - 1.0) <= tol)) throw std::invalid_argument("weights must sum to 1");
    uniform_ = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights.front(); });
    weights_ = std::move(weights);
}

std::span<const double> FiniteMeasureSpace::coordinates() const {
    if (!has_coordinates()) throw std::logic_error("space has no coordinates");
    return data_;
}

std::span<const double> FiniteMeasureSpace::point(std::size_t i) const {
    if (!has_coordinates()) throw std::logic_error("space has no coordinates");
    if (i >= size()) throw std::out_of_range("point index out of range");
    return std::span<const double>(data_).subspan(i * dim_, dim_);
}

std::span<const double> FiniteMeasureSpace::distance_row(std::size_t i) const {
    if (has_coordinates()) throw std::logic_error("space has no distance matrix");
    if (i >= size()) throw std::out_of_range("point index out of range");
    return std::span<const double>(data_).subspan(i * size(), size());
}

double FiniteMeasureSpace::distance(std::size_t i, std::size_t j) const noexcept {
    if (geometry_ == Geometry::distances) return data_[i * size() + j];
    if (i == j) return 0.0;
    const double* a = data_.data() + i * dim_;
    const double* b = data_.data() + j * dim_;
    return euclidean({a, dim_}, {b, dim_});
}

double FiniteMeasureSpace::distance_to(std::span<const double> query, std::size_t i) const noexcept {
    return euclidean(query, {data_.data() + i * dim_, dim_});
}

FiniteMeasureSpace FiniteMeasureSpace::scaled(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("scale factor must be positive");
    FiniteMeasureSpace s = *this;
    for (double& x : s.data_) x *= lambda;
    return s;
}

FiniteMeasureSpace FiniteMeasureSpace::permuted(std::span<const std::size_t> perm) const {
    const std::size_t n = size();
    if (perm.size() != n) throw std::invalid_argument("permutation size mismatch");
    std::vector<char> seen(n, 0);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw std::invalid_argument("not a permutation");
        seen[p] = 1;
    }
    FiniteMeasureSpace s;
    s.geometry_ = geometry_;
    s.dim_ = dim_;
    s.uniform_ = uniform_;
    s.weights_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.weights_[i] = weights_[perm[i]];
    if (!labels_.empty()) {
        s.labels_.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.labels_[i] = labels_[perm[i]];
    }
    if (has_coordinates()) {
        s.data_.resize(data_.size());
        for (std::size_t i = 0; i < n; ++i)
            std::copy_n(data_.begin() + perm[i] * dim_, dim_, s.data_.begin() + i * dim_);
    } else {
        s.data_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s.data_[i * n + j] = data_[perm[i] * n + perm[j]];
    }
    return s;
}

SubsampleIndex::SubsampleIndex(std::vector<std::size_t> indices, std::size_t parent_size)
    : indices_(std::move(indices)), parent_size_(parent_size) {
    if (indices_.size() > parent_size_) throw std::invalid_argument("subsample larger than its parent");
    std::vector<char> seen(parent_size_, 0);
    for (auto i : indices_) {
        if (i >= parent_size_) throw std::out_of_range("subsample index out of range");
        if (seen[i]) throw std::invalid_argument("subsample indices must be distinct");
        seen[i] = 1;
    }
}

SubsampleIndex SubsampleIndex::all(std::size_t parent_size) {
    std::vector<std::size_t> idx(parent_size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return SubsampleIndex(std::move(idx), parent_size);
}

double pairwise_distance(const FiniteMeasureSpace& space, std::size_t i, std::size_t j) {
    if (i >= space.size() || j >= space.size()) throw std::out_of_range("pairwise_distance: index out of range");
    return space.distance(i, j);
}

void check_triangle_inequality(const FiniteMeasureSpace& space, double tol) {
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (space.distance(i, k) > space.distance(i, j) + space.distance(j, k) + tol) {
                    std::ostringstream msg;
                    msg << "triangle inequality violated at (" << i << ", " << j << ", " << k << ")";
                    throw std::invalid_argument(msg.str());
                }
}

FiniteMeasureSpace load_point_cloud(const std::filesystem::path& path) {
    const CsvRows csv = read_csv(path);
    if (csv.rows.empty()) throw std::runtime_error(path.string() + ": no data rows");

    std::size_t first_data = 0;
    std::optional<std::size_t> weight_col;
    std::optional<std::size_t> label_col;
    const auto& head = csv.rows.front();
    const bool has_header = std::any_of(head.begin(), head.end(), [](const std::string& f) { return !parse_real(f); });
    if (has_header) {
        first_data = 1;
        for (std::size_t c = 0; c < head.size(); ++c) {
            if (head[c] == "weight") weight_col = c;
            else if (head[c] == "label") label_col = c;
        }
    }
    const std::size_t width = head.size();
    const std::size_t dim = width - (weight_col ? 1 : 0) - (label_col ? 1 : 0);
    if (dim == 0) throw std::runtime_error(path.string() + ": no coordinate columns");

    std::vector<double> coords;
    std::vector<double> weights;
    std::vector<std::string> labels;
    for (std::size_t r = first_data; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const auto loc = where(path, csv.line_numbers[r]);
        if (row.size() != width)
            throw std::runtime_error(loc + ": ragged row (expected " + std::to_string(width) + " fields, got " +
                                     std::to_string(row.size()) + ")");
        for (std::size_t c = 0; c < width; ++c) {
            if (label_col && c == *label_col) {
                labels.push_back(row[c]);
                continue;
            }
            const auto v = parse_real(row[c]);
            if (!v) throw std::runtime_error(loc + ": non-numeric field '" + row[c] + "'");
            if (weight_col && c == *weight_col) weights.push_back(*v);
            else coords.push_back(*v);
        }
    }
    if (coords.empty()) throw std::runtime_error(path.string() + ": no data rows");
    if (weight_col) weights = normalized(std::move(weights), path.string());
    return FiniteMeasureSpace::from_coordinates(std::move(coords), dim, std::move(weights), std::move(labels));
}

std::vector<double> load_weights(const std::filesystem::path& path) {
    const CsvRows csv = read_csv(path);
    std::vector<double> w;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row.size() != 1) throw std::runtime_error(where(path, csv.line_numbers[r]) + ": expected one weight per row");
        if (r == 0 && row[0] == "weight") continue;
        const auto v = parse_real(row[0]);
        if (!v) throw std::runtime_error(where(path, csv.line_numbers[r]) + ": non-numeric weight '" + row[0] + "'");
        w.push_back(*v);
    }
    return normalized(std::move(w), path.string());
}

FiniteMeasureSpace load_distance_matrix(const std::filesystem::path& path,
                                        const std::optional<std::filesystem::path>& weights_path) {
    const CsvRows csv = read_csv(path);
    const std::size_t n = csv.rows.size();
    if (n == 0) throw std::runtime_error(path.string() + ": empty distance matrix");
    std::vector<double> m;
    m.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = csv.rows[r];
        const auto loc = where(path, csv.line_numbers[r]);
        if (row.size() != n) throw std::runtime_error(loc + ": distance matrix is not square");
        for (const auto& f : row) {
            const auto v = parse_real(f);
            if (!v) throw std::runtime_error(loc + ": non-numeric field '" + f + "'");
            if (*v < 0.0) throw std::runtime_error(loc + ": negative distance");
            m.push_back(*v);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(m[i * n + i]) <= kDiagonalTol)) throw std::runtime_error(path.string() + ": nonzero diagonal");
        m[i * n + i] = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double& a = m[i * n + j];
            double& b = m[j * n + i];
            if (!(std::abs(a - b) < kLoadAsymmetryTol))
                throw std::runtime_error(path.string() + ": asymmetric distance matrix at (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ")");
            if (a != b) a = b = 0.5 * (a + b);
        }
    }
    std::vector<double> weights;
    if (weights_path) weights = load_weights(*weights_path);
    return FiniteMeasureSpace::from_distances(std::move(m), n, std::move(weights));
}

void save_point_cloud(const FiniteMeasureSpace& space, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const std::size_t d = space.dimension();
    const bool labelled = !space.labels().empty();
    for (std::size_t k = 0; k < d; ++k) out << (k ? "," : "") << 'x' << k;
    out << ",weight" << (labelled ? ",label" : "") << '\n';
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto p = space.point(i);
        for (std::size_t k = 0; k < d; ++k) {
            if (k) out << ',';
            write_real(out, p[k]);
        }
        out << ',';
        write_real(out, space.weight(i));
        if (labelled) out << ',' << space.labels()[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_distance_matrix(const FiniteMeasureSpace& space, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) out << ',';
            write_real(out, space.distance(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_weights(const FiniteMeasureSpace& space, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "weight\n";
    for (double w : space.weights()) {
        write_real(out, w);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dtmsig
