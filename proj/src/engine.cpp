#include "bayestree/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>

#include "bayestree/coefficients.hpp"
#include "bayestree/errors.hpp"
#include "bayestree/index.hpp"
#include "bayestree/special.hpp"

namespace bayestree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct XTrack {
    double x = 0.0;
    bool on = false;  // x lies inside the current cell
};

struct NodeOut {
    double log_p = 0.0;  // scaled surrogate when flagged
    bool flagged = false;
    double g = 0.0;      // split probability of the cell
    double hx = 0.0;     // expected height at the tracked point; +inf divergent
    double hbar = 0.0;   // data-averaged expected height
    std::vector<double> dim;
    int arena_id = -1;
};

struct Ctx {
    ModelParams params;
    EngineOptions opts;
    double log_u = 0.0;
    double log_s = 0.0;
    std::int64_t count = 0;
    std::vector<double> prior_a;
    std::map<std::int64_t, std::vector<double>> mp_dims;
    std::vector<NodeOut> empty_trunc;  // truncated empty-cell closures by remaining depth
    std::vector<IndexNode>* arena = nullptr;

    const std::vector<double>& multipoint_dims(std::int64_t mult) {
        auto it = mp_dims.find(mult);
        if (it == mp_dims.end())
            it = mp_dims.emplace(mult, multipoint_dim_coefficients(
                                           opts.dim_cutoff, mult, params)).first;
        return it->second;
    }
};

int arena_reserve(Ctx& c) {
    if (!c.arena) return -1;
    c.arena->push_back({});
    return static_cast<int>(c.arena->size()) - 1;
}

void arena_store(Ctx& c, int id, const NodeOut& out, std::int64_t n, double value,
                 int depth, bool terminal, int left, int right) {
    if (id < 0) return;
    IndexNode& node = (*c.arena)[static_cast<std::size_t>(id)];
    node.log_p = out.log_p;
    node.n = n;
    node.value = value;
    node.left = left;
    node.right = right;
    node.depth = depth;
    node.flagged = out.flagged;
    node.terminal = terminal;
}

// Closed forms at infinite depth for a cell that is empty or holds one
// coincident group of k points. When a point is tracked here it coincides
// with the group (the recursion would have continued otherwise).
NodeOut closed_terminal(std::int64_t k, int depth, const XTrack& xt, Ctx& c) {
    NodeOut out;
    const ModelParams& p = c.params;
    const double su = p.s / p.u;  // +inf when u == 0
    if (k <= 1) {
        // evidence is exactly 1: the chain factor wbar equals s
        out.log_p = 0.0;
        out.g = p.s;
        out.hx = xt.on ? su : 0.0;
        out.hbar = su;
        if (c.opts.want_dim) out.dim = c.prior_a;
        return out;
    }
    const double lw = log_wbar(k, p);
    const bool heavy = is_heavy(k, p);
    double wt;  // split probability, min(wbar, 1)
    if (heavy) {
        out.flagged = true;
        // rescaled surrogate: wbar^-depth at the group's separation level
        out.log_p = -static_cast<double>(depth) * lw;
        out.g = 1.0;
        out.hx = xt.on ? kInf : 0.0;
        wt = 1.0;
    } else {
        const double wbar = std::exp(lw);
        out.log_p = c.log_u - std::log1p(-wbar);
        out.g = wbar;
        out.hx = xt.on ? wbar / (1.0 - wbar) : 0.0;
        wt = wbar;
    }
    // averaged height from self-consistency down the coincident chain: the
    // occupied child carries weight (k+a)/(k+2a) < 1, the empty sibling s/u
    const double a = p.alpha;
    const double beta = (static_cast<double>(k) + a) / (static_cast<double>(k) + 2.0 * a);
    const double gam = a / (static_cast<double>(k) + 2.0 * a);
    out.hbar = wt * (1.0 + gam * su) / (1.0 - wt * beta);
    if (c.opts.want_dim) out.dim = c.multipoint_dims(k);
    return out;
}

NodeOut truncated_terminal(Ctx& c) {
    NodeOut out;
    out.log_p = 0.0;
    out.g = 0.0;
    out.hx = 0.0;
    out.hbar = 0.0;
    if (c.opts.want_dim) {
        out.dim.assign(static_cast<std::size_t>(c.opts.dim_cutoff), 0.0);
        out.dim[0] = 1.0;
    }
    return out;
}

// Truncated-model closure for a uniform cell: everything below it is a full
// binary expansion of empty cells, plus one coincident chain when the cell
// holds a group. Expanding that explicitly costs 2^remaining nodes, so the
// levels are folded bottom-up instead, one combine per level, with the same
// arithmetic the explicit recursion would perform.
const NodeOut& empty_truncated(int remaining, Ctx& c) {
    if (c.empty_trunc.empty()) c.empty_trunc.push_back(truncated_terminal(c));
    const ModelParams& p = c.params;
    while (static_cast<int>(c.empty_trunc.size()) <= remaining) {
        const NodeOut& prev = c.empty_trunc.back();
        NodeOut out;
        const double t = prev.log_p + prev.log_p - log_weight(0, 0, p.alpha);
        out.log_p = log_mix(t, p);
        out.g = -std::expm1(c.log_u - out.log_p);
        // both child weights are a/(2a) == 0.5 exactly, and the children match
        out.hbar = out.g == 0.0 ? 0.0 : out.g * (1.0 + prev.hbar);
        if (c.opts.want_dim) {
            const std::size_t nd = static_cast<std::size_t>(c.opts.dim_cutoff);
            out.dim.assign(nd, 0.0);
            out.dim[0] = 1.0 - out.g;
            for (std::size_t j = 1; j < nd; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < j; ++i)
                    acc += prev.dim[i] * prev.dim[j - 1 - i];
                out.dim[j] = out.g * acc;
            }
        }
        c.empty_trunc.push_back(std::move(out));
    }
    return c.empty_trunc[static_cast<std::size_t>(remaining)];
}

NodeOut group_truncated(std::int64_t k, int remaining, const XTrack& xt, Ctx& c) {
    const ModelParams& p = c.params;
    const double lw = log_weight(k, 0, p.alpha);
    const double denom = static_cast<double>(k) + 2.0 * p.alpha;
    const double wg = (static_cast<double>(k) + p.alpha) / denom;
    const double we = p.alpha / denom;
    empty_truncated(remaining - 1, c);  // fill the cache so references stay valid
    NodeOut cur = truncated_terminal(c);
    for (int level = 1; level <= remaining; ++level) {
        const NodeOut& empty = c.empty_trunc[static_cast<std::size_t>(level - 1)];
        NodeOut out;
        const double t = cur.log_p + empty.log_p - lw;
        out.log_p = log_mix(t, p);
        out.g = -std::expm1(c.log_u - out.log_p);
        out.hbar = out.g == 0.0 ? 0.0
                                : out.g * (1.0 + wg * cur.hbar + we * empty.hbar);
        if (xt.on) out.hx = out.g == 0.0 ? 0.0 : out.g * (1.0 + cur.hx);
        if (c.opts.want_dim) {
            const std::size_t nd = static_cast<std::size_t>(c.opts.dim_cutoff);
            out.dim.assign(nd, 0.0);
            out.dim[0] = 1.0 - out.g;
            for (std::size_t j = 1; j < nd; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < j; ++i)
                    acc += cur.dim[i] * empty.dim[j - 1 - i];
                out.dim[j] = out.g * acc;
            }
        }
        cur = std::move(out);
    }
    return cur;
}

NodeOut recurse(std::vector<double>& pts, std::size_t lo, std::size_t hi, int depth,
                const XTrack& xt, Ctx& c) {
    ++c.count;
    if (depth > c.opts.depth_cap) throw depth_cap_error(c.opts.depth_cap);
    const std::int64_t k = static_cast<std::int64_t>(hi - lo);

    if (c.opts.truncate_depth) {
        const int m = *c.opts.truncate_depth;
        if (depth == m) {
            NodeOut out = truncated_terminal(c);
            out.arena_id = arena_reserve(c);
            arena_store(c, out.arena_id, out, k, k ? pts[lo] : 0.0, depth, true, -1, -1);
            return out;
        }
        const bool uniform = k == 0 || pts[lo] == pts[hi - 1];
        const bool x_settled = !xt.on || k == 0 || (uniform && xt.x == pts[lo]);
        if (uniform && x_settled && depth >= c.opts.min_depth) {
            NodeOut out = k == 0 ? empty_truncated(m - depth, c)
                                 : group_truncated(k, m - depth, xt, c);
            if (xt.on && k == 0) out.hx = out.hbar;  // x walks identical empty cells
            out.arena_id = arena_reserve(c);
            arena_store(c, out.arena_id, out, k, k ? pts[lo] : 0.0, depth, true, -1, -1);
            return out;
        }
    } else {
        const bool uniform = k == 0 || pts[lo] == pts[hi - 1];
        const bool x_settled = !xt.on || k == 0 || (uniform && xt.x == pts[lo]);
        if (uniform && x_settled && depth >= c.opts.min_depth) {
            NodeOut out = closed_terminal(k, depth, xt, c);
            out.arena_id = arena_reserve(c);
            arena_store(c, out.arena_id, out, k, k ? pts[lo] : 0.0, depth, true, -1, -1);
            return out;
        }
    }

    // split at the midpoint and rescale each half onto [0, 1), in place
    const auto begin = pts.begin();
    const std::size_t mid = static_cast<std::size_t>(
        std::lower_bound(begin + static_cast<std::ptrdiff_t>(lo),
                         begin + static_cast<std::ptrdiff_t>(hi), 0.5) -
        begin);
    for (std::size_t i = lo; i < mid; ++i) pts[i] = 2.0 * pts[i];
    for (std::size_t i = mid; i < hi; ++i) pts[i] = 2.0 * pts[i] - 1.0;

    XTrack xl, xr;
    bool x_left = false;
    if (xt.on) {
        if (xt.x < 0.5) {
            xl = {2.0 * xt.x, true};
            x_left = true;
        } else {
            xr = {2.0 * xt.x - 1.0, true};
        }
    }

    const int id = arena_reserve(c);
    const NodeOut left = recurse(pts, lo, mid, depth + 1, xl, c);
    const NodeOut right = recurse(pts, mid, hi, depth + 1, xr, c);

    const std::int64_t n0 = static_cast<std::int64_t>(mid - lo);
    const std::int64_t n1 = static_cast<std::int64_t>(hi - mid);
    const ModelParams& p = c.params;

    NodeOut out;
    const double t = left.log_p + right.log_p - log_weight(n0, n1, p.alpha);
    out.flagged = left.flagged || right.flagged;
    // a divergent child swamps the additive u term
    out.log_p = out.flagged ? c.log_s + t : log_mix(t, p);
    out.g = out.flagged ? 1.0 : -std::expm1(c.log_u - out.log_p);

    const double denom = static_cast<double>(n0 + n1) + 2.0 * p.alpha;
    const double wl = (static_cast<double>(n0) + p.alpha) / denom;
    const double wr = (static_cast<double>(n1) + p.alpha) / denom;
    out.hbar = out.g == 0.0
                   ? 0.0
                   : out.g * (1.0 + wl * left.hbar + wr * right.hbar);
    if (xt.on) {
        const double hchild = x_left ? left.hx : right.hx;
        out.hx = out.g == 0.0 ? 0.0 : out.g * (1.0 + hchild);
    }
    if (c.opts.want_dim) {
        const std::size_t n = static_cast<std::size_t>(c.opts.dim_cutoff);
        out.dim.assign(n, 0.0);
        out.dim[0] = 1.0 - out.g;
        for (std::size_t j = 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < j; ++i)
                acc += left.dim[i] * right.dim[j - 1 - i];
            out.dim[j] = out.g * acc;
        }
    }

    arena_store(c, id, out, k, 0.0, depth, false, left.arena_id, right.arena_id);
    out.arena_id = id;
    return out;
}

ScalarOrDivergent to_scalar(double v) {
    return {v, !std::isfinite(v)};
}

void validate(const std::optional<double>& x, const EngineOptions& opts) {
    if (x && !(*x >= 0.0 && *x < 1.0))
        throw std::domain_error("query point must lie in [0, 1)");
    if (opts.dim_cutoff < 1) throw std::domain_error("dim_cutoff must be >= 1");
    if (opts.min_depth < 0) throw std::domain_error("min_depth must be >= 0");
    if (opts.depth_cap < 1) throw std::domain_error("depth_cap must be >= 1");
    if (opts.truncate_depth && *opts.truncate_depth < 0)
        throw std::domain_error("truncate_depth must be >= 0");
}

Ctx make_ctx(const ModelParams& params, const EngineOptions& opts) {
    Ctx c;
    c.params = params;
    c.opts = opts;
    c.log_u = std::log(params.u);
    c.log_s = std::log(params.s);
    if (opts.want_dim) c.prior_a = prior_dim_coefficients(opts.dim_cutoff, params);
    return c;
}

InferenceResult package(const NodeOut& root, const Dataset& data,
                        std::optional<double> x, Ctx& c) {
    InferenceResult r;
    r.log_evidence = root.flagged ? LogValue::divergent(root.log_p)
                                  : LogValue::from_log(root.log_p);
    r.split_prob_root = root.g;
    if (x) r.height_at_x = to_scalar(root.hx);
    r.avg_height = to_scalar(root.hbar);
    r.avg_log_volume = r.avg_height;
    r.dim_dist = root.dim;
    r.dim_tail = c.opts.want_dim
                     ? std::max(0.0, 1.0 - std::accumulate(r.dim_dist.begin(),
                                                           r.dim_dist.end(), 0.0))
                     : 0.0;
    r.recursion_count = c.count;
    r.div_class = divergence_class(data, c.params);
    return r;
}

}  // namespace

int default_depth_cap() {
    if (const char* env = std::getenv("BAYESTREE_DEPTH_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1000000)
            return static_cast<int>(v);
    }
    return 1100;
}

InferenceResult evaluate(const Dataset& data, std::optional<double> x,
                         const ModelParams& params, const EngineOptions& opts) {
    validate(x, opts);
    Ctx c = make_ctx(params, opts);
    std::vector<double> scratch = data.points();
    const XTrack xt{x.value_or(0.0), x.has_value()};
    const NodeOut root = recurse(scratch, 0, scratch.size(), 0, xt, c);
    return package(root, data, x, c);
}

double split_probability(const Dataset& data, const ModelParams& params,
                         const EngineOptions& opts) {
    EngineOptions lean = opts;
    lean.want_dim = false;
    return evaluate(data, std::nullopt, params, lean).split_prob_root;
}

TreeHeights tree_heights(const Dataset& data, double x, const ModelParams& params,
                         const EngineOptions& opts) {
    EngineOptions lean = opts;
    lean.want_dim = false;
    const InferenceResult r = evaluate(data, x, params, lean);
    return {*r.height_at_x, r.avg_height, r.avg_log_volume};
}

std::pair<std::vector<double>, double> dimension_distribution(
    const Dataset& data, const ModelParams& params, const EngineOptions& opts) {
    const InferenceResult r = evaluate(data, std::nullopt, params, opts);
    return {r.dim_dist, r.dim_tail};
}

std::pair<LogValue, DivergenceClass> scaled_evidence(const Dataset& data,
                                                     const ModelParams& params,
                                                     const EngineOptions& opts) {
    EngineOptions lean = opts;
    lean.want_dim = false;
    const InferenceResult r = evaluate(data, std::nullopt, params, lean);
    return {r.log_evidence, r.div_class};
}

EvidenceIndex EvidenceIndex::build(const Dataset& data, const ModelParams& params,
                                   const EngineOptions& opts) {
    if (opts.truncate_depth)
        throw error("evidence index requires the infinite-depth model");
    EngineOptions lean = opts;
    lean.want_dim = false;
    validate(std::nullopt, lean);
    Ctx c = make_ctx(params, lean);
    EvidenceIndex index;
    index.nodes_.reserve(2 * data.size() + 16);
    c.arena = &index.nodes_;
    std::vector<double> scratch = data.points();
    recurse(scratch, 0, scratch.size(), 0, XTrack{}, c);
    index.data_ = std::make_shared<Dataset>(data);
    index.params_ = params;
    index.class_ = divergence_class(data, params);
    index.depth_cap_ = lean.depth_cap;
    return index;
}

}  // namespace bayestree
