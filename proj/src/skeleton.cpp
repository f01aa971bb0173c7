#include "bayestree/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "bayestree/errors.hpp"
#include "bayestree/special.hpp"

namespace bayestree {

namespace {

constexpr std::size_t kNodeLimit = std::size_t{1} << 22;

struct Ctx {
    ModelParams p;
    double log_u = 0.0;
    double log_s = 0.0;
    int max_depth = 32;
    int depth_cap = 1100;
    std::vector<SkeletonNode>* arena = nullptr;
};

struct Out {
    double log_p = 0.0;  // scaled surrogate when flag is set
    bool flag = false;
};

int reserve_node(Ctx& c) {
    if (c.arena->size() >= kNodeLimit)
        throw error("map skeleton exceeds the node limit; reduce max_depth");
    c.arena->push_back({});
    return static_cast<int>(c.arena->size()) - 1;
}

Out rec(std::vector<double>& pts, std::size_t lo, std::size_t hi, int depth,
        double x_lo, int id, Ctx& c) {
    if (depth > c.depth_cap) throw depth_cap_error(c.depth_cap);
    const std::int64_t k = static_cast<std::int64_t>(hi - lo);
    {
        SkeletonNode& node = (*c.arena)[static_cast<std::size_t>(id)];
        node.depth = depth;
        node.lo = x_lo;
        node.n = k;
    }

    const bool uniform = k == 0 || pts[lo] == pts[hi - 1];
    Out out;
    bool split;
    if (uniform) {
        // closed forms: the subtree is a self-similar coincident chain
        const bool heavy = k >= 2 && is_heavy(k, c.p);
        double g;
        if (heavy) {
            out.flag = true;
            out.log_p = -static_cast<double>(depth) * log_wbar(k, c.p);
            g = 1.0;
            split = true;  // the split term diverges with the evidence
        } else if (k >= 2) {
            const double lwb = log_wbar(k, c.p);
            const double wbar = std::exp(lwb);
            out.log_p = c.log_u - std::log1p(-wbar);
            g = wbar;
            // s p0 p1 / w <= u reduces to wbar <= 1 - wbar; comparing the two
            // logs keeps the tie exact, and ties stay leaves
            split = lwb > std::log1p(-wbar);
        } else {
            out.log_p = 0.0;
            g = c.p.s;
            split = c.log_s > c.log_u;  // w(1,0) = w(0,0) = 1 exactly
        }
        SkeletonNode& node = (*c.arena)[static_cast<std::size_t>(id)];
        node.split_prob = g;
        if (!split) return out;
        if (depth >= c.max_depth) {
            node.truncated = true;
            return out;
        }
    } else {
        split = true;  // provisional; decided below from the children
    }

    // expand: partition the cell and build both subtrees depth-first, so a
    // rollback is a simple truncation of the arena
    const auto begin = pts.begin();
    const std::size_t mid = static_cast<std::size_t>(
        std::lower_bound(begin + static_cast<std::ptrdiff_t>(lo),
                         begin + static_cast<std::ptrdiff_t>(hi), 0.5) -
        begin);
    for (std::size_t i = lo; i < mid; ++i) pts[i] = 2.0 * pts[i];
    for (std::size_t i = mid; i < hi; ++i) pts[i] = 2.0 * pts[i] - 1.0;
    const double half = std::ldexp(1.0, -(depth + 1));

    const int left_id = reserve_node(c);
    const Out left = rec(pts, lo, mid, depth + 1, x_lo, left_id, c);
    const int right_id = reserve_node(c);
    const Out right = rec(pts, mid, hi, depth + 1, x_lo + half, right_id, c);

    const double t =
        left.log_p + right.log_p -
        log_weight(static_cast<std::int64_t>(mid - lo),
                   static_cast<std::int64_t>(hi - mid), c.p.alpha);
    out.flag = out.flag || left.flag || right.flag;
    const double log_split_term = c.log_s + t;
    out.log_p = out.flag ? log_split_term : log_mix(t, c.p);

    SkeletonNode& node = (*c.arena)[static_cast<std::size_t>(id)];
    if (!uniform) {
        node.split_prob =
            out.flag ? 1.0 : -std::expm1(c.log_u - out.log_p);
        split = out.flag || log_split_term > c.log_u;
        if (split && depth >= c.max_depth) {
            node.truncated = true;
            split = false;
            // children were only needed for the evidence; drop them
            c.arena->resize(static_cast<std::size_t>(id) + 1);
            return out;
        }
        if (!split) {
            c.arena->resize(static_cast<std::size_t>(id) + 1);
            return out;
        }
    }
    node.leaf = false;
    node.left = left_id;
    node.right = right_id;
    return out;
}

void render(const TreeSkeleton& tree, int id, std::string& out) {
    const SkeletonNode& node = tree.nodes[static_cast<std::size_t>(id)];
    const double width = std::ldexp(1.0, -node.depth);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%*s[%.10g, %.10g) n=%lld p_split=%.6g %s%s\n",
                  2 * node.depth, "", node.lo, node.lo + width,
                  static_cast<long long>(node.n), node.split_prob,
                  node.leaf ? "leaf" : "split", node.truncated ? " truncated" : "");
    out += buf;
    if (!node.leaf) {
        render(tree, node.left, out);
        render(tree, node.right, out);
    }
}

}  // namespace

TreeSkeleton map_skeleton(const Dataset& data, const ModelParams& params,
                          int max_depth, const EngineOptions& opts) {
    if (max_depth < 0) throw std::domain_error("max_depth must be >= 0");
    Ctx c;
    c.p = params;
    c.log_u = std::log(params.u);
    c.log_s = std::log(params.s);
    c.max_depth = max_depth;
    c.depth_cap = opts.depth_cap;
    TreeSkeleton tree;
    c.arena = &tree.nodes;
    std::vector<double> scratch = data.points();
    const int root = reserve_node(c);
    rec(scratch, 0, scratch.size(), 0, 0.0, root, c);
    return tree;
}

std::string format_skeleton(const TreeSkeleton& tree) {
    std::string out;
    if (!tree.nodes.empty()) render(tree, 0, out);
    return out;
}

}  // namespace bayestree
