#ifndef BAYESTREE_DATASET_HPP
#define BAYESTREE_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "bayestree/params.hpp"

namespace bayestree {

enum class CompactifyMode { reciprocal, rational };

// Map a value from an unbounded domain onto [0, 1).
//   reciprocal: x in (1, inf] -> 1/x, monotone decreasing.
//   rational:   x in (-inf, inf) -> the unique y in (0, 1) with
//               (2y - 1) / (y (1 - y)) = x, monotone increasing; 0 -> 1/2.
double compactify(double x, CompactifyMode mode);

// Sorted multiset of points in [0, 1). Immutable once constructed; equal
// points are detected by exact bit equality, which the halving transforms
// below preserve.
class Dataset {
  public:
    Dataset() = default;

    // Takes ownership, sorts, and validates every point lies in [0, 1).
    explicit Dataset(std::vector<double> points);

    // One decimal literal per line; blank lines and '#' comments are ignored.
    // Each parsed value is passed through `mode` when given, and must land in
    // [0, 1). Malformed or out-of-domain lines raise parse_error with the
    // 1-based line number.
    static Dataset load(std::istream& in,
                        std::optional<CompactifyMode> mode = std::nullopt);

    [[nodiscard]] const std::vector<double>& points() const { return points_; }
    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] bool empty() const { return points_.empty(); }

    // Multiplicity of x in the dataset (exact equality).
    [[nodiscard]] std::int64_t count_of(double x) const;

    // Runs of equal points as (value, multiplicity), ascending.
    [[nodiscard]] std::vector<std::pair<double, std::int64_t>> multiplicities() const;

    // Split at 1/2 and rescale each half back onto [0, 1): left keeps x < 1/2
    // mapped to 2x, right keeps x >= 1/2 mapped to 2x - 1. Both maps are exact
    // in binary floating point.
    [[nodiscard]] std::pair<Dataset, Dataset> partition() const;

    // Dataset with `copies` occurrences of x inserted.
    [[nodiscard]] Dataset with_inserted(double x, int copies = 1) const;

  private:
    std::vector<double> points_;
};

// One coincident group whose multiplicity makes the evidence diverge.
struct HeavyPoint {
    double value;
    std::int64_t multiplicity;
    friend bool operator==(const HeavyPoint&, const HeavyPoint&) = default;
};

// The multiset of heavy points of a dataset under given parameters. Ratios of
// divergent evidences are meaningful only between identical classes.
struct DivergenceClass {
    std::vector<HeavyPoint> heavy;  // ascending by value
    [[nodiscard]] bool empty() const { return heavy.empty(); }
    friend bool operator==(const DivergenceClass&, const DivergenceClass&) = default;
};

DivergenceClass divergence_class(const Dataset& data, const ModelParams& params);

}  // namespace bayestree

#endif
