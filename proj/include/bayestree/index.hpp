#ifndef BAYESTREE_INDEX_HPP
#define BAYESTREE_INDEX_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "bayestree/dataset.hpp"
#include "bayestree/engine.hpp"
#include "bayestree/logdomain.hpp"
#include "bayestree/params.hpp"

namespace bayestree {

// One cell of the evidence recursion tree. log_p is the scaled surrogate when
// flagged. Terminal cells are empty or hold a single coincident group, whose
// value is stored in the cell-local frame (rescaled to [0, 1)).
struct IndexNode {
    double log_p = 0.0;
    std::int64_t n = 0;
    double value = 0.0;  // coincident value, cell-local; meaningful iff terminal && n > 0
    int left = -1;       // arena index, -1 when terminal
    int right = -1;
    int depth = 0;
    bool flagged = false;
    bool terminal = true;
};

// Precomputed evidence tree of a dataset: every cell from the root down to
// each group's separation level, with its evidence. Point queries then walk
// one root-to-leaf path instead of re-running the full recursion.
class EvidenceIndex {
  public:
    static EvidenceIndex build(const Dataset& data, const ModelParams& params,
                               const EngineOptions& opts = {});

    [[nodiscard]] const std::vector<IndexNode>& nodes() const { return nodes_; }
    [[nodiscard]] const IndexNode& root() const { return nodes_.front(); }
    [[nodiscard]] const Dataset& data() const { return *data_; }
    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] LogValue log_evidence() const;
    [[nodiscard]] const DivergenceClass& div_class() const { return class_; }

    // log p(D with `copies` occurrences of x inserted), sharing the scaling
    // of log_evidence(). Divergent-state result means the augmented dataset
    // left this index's divergence class (the ratio to p(D) is infinite).
    [[nodiscard]] LogValue augmented_log_evidence(double x, int copies) const;

    // Predictive density p(x|D). Divergent iff adding x changes the class.
    [[nodiscard]] LogValue query_density(double x) const;

    // Var[q(x) | D]; divergent unless both one and two added copies of x stay
    // within the class (i.e. x does not occur in D, for the focal parameters).
    [[nodiscard]] ScalarOrDivergent query_variance(double x) const;

    // E[1{y <= a} | D], the posterior mean cdf at a.
    [[nodiscard]] double query_cdf(double a) const;

    // E[h(x) | D], expected tree height at x.
    [[nodiscard]] ScalarOrDivergent query_height(double x) const;

  private:
    EvidenceIndex() = default;
    std::vector<IndexNode> nodes_;
    std::shared_ptr<const Dataset> data_;
    ModelParams params_;
    DivergenceClass class_;
    int depth_cap_ = 1100;
};

// p(x|D) = p(D, x) / p(D), one index build plus one path query.
LogValue predictive_density(const Dataset& data, double x, const ModelParams& params,
                            const EngineOptions& opts = {});

// Var[q(x)|D] = p(D,x,x)/p(D) - (p(D,x)/p(D))^2.
ScalarOrDivergent posterior_variance(const Dataset& data, double x,
                                     const ModelParams& params,
                                     const EngineOptions& opts = {});

}  // namespace bayestree

#endif
