#ifndef BAYESTREE_ENGINE_HPP
#define BAYESTREE_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bayestree/dataset.hpp"
#include "bayestree/logdomain.hpp"
#include "bayestree/params.hpp"

namespace bayestree {

// Depth cap default, overridable through the BAYESTREE_DEPTH_CAP environment
// variable. Distinct doubles separate by depth ~1075, so 1100 never triggers
// on valid input.
int default_depth_cap();

struct EngineOptions {
    int dim_cutoff = 16;   // dimension distribution entries 0 .. cutoff-1
    int min_depth = 0;     // force recursion at least this deep before closed forms
    std::optional<int> truncate_depth;  // finite-depth model: cells at this depth stop with p = 1
    int depth_cap = default_depth_cap();
    bool want_dim = true;  // skip the O(cutoff^2) convolutions when false
};

// A real result that may be +infinity (e.g. expected height at a point whose
// multiplicity makes the posterior concentrate on infinitely deep trees).
struct ScalarOrDivergent {
    double value = 0.0;
    bool divergent = false;
};

struct InferenceResult {
    LogValue log_evidence;
    double split_prob_root = 0.0;
    // Expected tree height at the query point; present iff x was supplied.
    std::optional<ScalarOrDivergent> height_at_x;
    ScalarOrDivergent avg_height;
    // Expected negative log cell volume, averaged over the data measure.
    // Equals avg_height at the root.
    ScalarOrDivergent avg_log_volume;
    std::vector<double> dim_dist;  // P[dimension == k], k = 0 .. cutoff-1
    double dim_tail = 0.0;         // 1 - sum(dim_dist)
    std::int64_t recursion_count = 0;
    DivergenceClass div_class;
};

// Exact posterior summary of the infinite-depth model (or the finite model
// when truncate_depth is set): evidence, root split probability, expected
// heights, and the model-dimension distribution, all in one recursion over
// the data. x, when given, must lie in [0, 1).
InferenceResult evaluate(const Dataset& data, std::optional<double> x,
                         const ModelParams& params, const EngineOptions& opts = {});

// Posterior probability that the root cell splits, 1 - u / p(D).
double split_probability(const Dataset& data, const ModelParams& params,
                         const EngineOptions& opts = {});

// (height at x, average height, average log volume).
struct TreeHeights {
    ScalarOrDivergent height_at_x;
    ScalarOrDivergent avg_height;
    ScalarOrDivergent avg_log_volume;
};
TreeHeights tree_heights(const Dataset& data, double x, const ModelParams& params,
                         const EngineOptions& opts = {});

// Dimension distribution entries and tail mass.
std::pair<std::vector<double>, double> dimension_distribution(
    const Dataset& data, const ModelParams& params, const EngineOptions& opts = {});

// Evidence together with its divergence class. For datasets with heavy points
// the LogValue is divergent and carries the rescaled surrogate.
std::pair<LogValue, DivergenceClass> scaled_evidence(const Dataset& data,
                                                     const ModelParams& params,
                                                     const EngineOptions& opts = {});

}  // namespace bayestree

#endif
