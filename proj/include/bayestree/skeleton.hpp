#ifndef BAYESTREE_SKELETON_HPP
#define BAYESTREE_SKELETON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bayestree/dataset.hpp"
#include "bayestree/engine.hpp"
#include "bayestree/params.hpp"

namespace bayestree {

// Node of the maximum-a-posteriori partition: a cell is a leaf iff the split
// term s p0 p1 / w does not exceed u (ties break toward leaf, giving the
// minimal tree). Coincident groups with a large enough split weight keep
// splitting self-similarly forever; expansion stops at max_depth and such
// nodes carry truncated = true.
struct SkeletonNode {
    int depth = 0;
    double lo = 0.0;       // left cell edge (display precision beyond depth 53)
    std::int64_t n = 0;    // data points in the cell
    double split_prob = 0.0;
    bool leaf = true;
    bool truncated = false;
    int left = -1;         // arena indices when expanded
    int right = -1;
};

struct TreeSkeleton {
    std::vector<SkeletonNode> nodes;  // root at index 0
};

TreeSkeleton map_skeleton(const Dataset& data, const ModelParams& params,
                          int max_depth = 32, const EngineOptions& opts = {});

// Indented one-node-per-line rendering.
std::string format_skeleton(const TreeSkeleton& tree);

}  // namespace bayestree

#endif
