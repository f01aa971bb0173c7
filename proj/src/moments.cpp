#include "bayestree/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bayestree/errors.hpp"
#include "bayestree/special.hpp"

namespace bayestree {

namespace {

struct Ctx {
    ModelParams params;
    EngineOptions opts;
    MomentSpec spec;
    double log_u = 0.0;
};

// average of the integrand over the cell [x_lo, x_lo + 2^-depth). For the
// indicator the threshold is carried in cell-local coordinates (the same
// exact doubling transform as the data), so the clamped value is exact at
// any depth; +-inf simply saturates the clamp.
double cell_avg(const Ctx& c, double x_lo, int depth, double a_local) {
    if (c.spec.kind == MomentSpec::Kind::indicator)
        return std::clamp(a_local, 0.0, 1.0);
    const int k = c.spec.exponent;
    const double w = std::ldexp(1.0, -std::min(depth, 1074));
    // average of (x_lo + w t)^k over t uniform in [0, 1)
    double binom = 1.0;
    double wpow = 1.0;
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        acc += binom * std::pow(x_lo, static_cast<double>(k - j)) * wpow /
               static_cast<double>(j + 1);
        binom *= static_cast<double>(k - j) / static_cast<double>(j + 1);
        wpow *= w;
    }
    return acc;
}

// posterior moment of a cell holding k coincident points at v (cell-local).
// Walks the coincident chain; stops where the remaining subtree's moment is
// its cell average (constant integrand, or cell too small to matter).
double group_moment(const Ctx& c, std::int64_t k, double v, double x_lo, int depth,
                    double a_local) {
    const ModelParams& p = c.params;
    const double g =
        k <= 1 ? p.s : std::min(std::exp(log_wbar(k, p)), 1.0);
    const double denom = static_cast<double>(k) + 2.0 * p.alpha;
    const double r_with = (static_cast<double>(k) + p.alpha) / denom;
    const double r_empty = p.alpha / denom;
    const bool indicator = c.spec.kind == MomentSpec::Kind::indicator;
    double acc = 1.0;
    double total = 0.0;
    for (int iter = 0;; ++iter) {
        const double avg = cell_avg(c, x_lo, depth, a_local);
        bool close = acc < 1e-17 || iter >= 4000;
        if (indicator)
            close = close || !(a_local > 0.0 && a_local < 1.0);
        else
            close = close || iter >= 64;
        if (close) {
            // a subtree's moment of a constant integrand is exactly that
            // constant (expected masses are normalized), so the cell average
            // closes the chain
            total += acc * avg;
            return total;
        }
        const bool v_left = v < 0.5;
        const double half = std::ldexp(1.0, -(depth + 1));
        const double sib_x_lo = v_left ? x_lo + half : x_lo;
        const double sib_a = v_left ? 2.0 * a_local - 1.0 : 2.0 * a_local;
        const double sib_avg = cell_avg(c, sib_x_lo, depth + 1, sib_a);
        total += acc * ((1.0 - g) * avg + g * r_empty * sib_avg);
        acc *= g * r_with;
        v = v_left ? 2.0 * v : 2.0 * v - 1.0;
        a_local = v_left ? 2.0 * a_local : 2.0 * a_local - 1.0;
        if (!v_left) x_lo += half;
        ++depth;
    }
}

struct NodeOut {
    double log_p = 0.0;
    bool flagged = false;
    double value = 0.0;  // posterior moment of the cell's subtree
};

// Truncated-model closure for a uniform cell holding one coincident group.
// Everything below is empty cells plus the group's chain, so the remaining
// levels fold one by one instead of expanding 2^remaining nodes. An empty
// sibling's log-evidence is exactly 0 at every remaining depth (the chain
// u + s * 1 / w(0,0) stays at 1), and its moment is its cell average (the
// expected mass profile of an undisturbed subtree is uniform).
NodeOut group_truncated(Ctx& c, std::int64_t k, double v, double x_lo, int depth,
                        double a_local, int remaining) {
    const ModelParams& p = c.params;
    const double lw = log_weight(k, 0, p.alpha);
    std::vector<double> lp(static_cast<std::size_t>(remaining) + 1, 0.0);
    for (int r = 1; r <= remaining; ++r) lp[r] = log_mix(lp[r - 1] - lw, p);
    const double denom = static_cast<double>(k) + 2.0 * p.alpha;
    const double r_with = (static_cast<double>(k) + p.alpha) / denom;
    const double r_empty = p.alpha / denom;
    double acc = 1.0;
    double total = 0.0;
    for (int r = remaining; r >= 1; --r) {
        const double g = -std::expm1(c.log_u - lp[r]);
        const double avg = cell_avg(c, x_lo, depth, a_local);
        const bool v_left = v < 0.5;
        const double half = std::ldexp(1.0, -(depth + 1));
        const double sib_x_lo = v_left ? x_lo + half : x_lo;
        const double sib_a = v_left ? 2.0 * a_local - 1.0 : 2.0 * a_local;
        const double sib_avg = cell_avg(c, sib_x_lo, depth + 1, sib_a);
        total += acc * ((1.0 - g) * avg + g * r_empty * sib_avg);
        acc *= g * r_with;
        v = v_left ? 2.0 * v : 2.0 * v - 1.0;
        a_local = v_left ? 2.0 * a_local : 2.0 * a_local - 1.0;
        if (!v_left) x_lo += half;
        ++depth;
    }
    total += acc * cell_avg(c, x_lo, depth, a_local);  // forced leaf row
    return {lp[static_cast<std::size_t>(remaining)], false, total};
}

NodeOut recurse(std::vector<double>& pts, std::size_t lo, std::size_t hi, int depth,
                double x_lo, double a_local, Ctx& c) {
    if (depth > c.opts.depth_cap) throw depth_cap_error(c.opts.depth_cap);
    const std::int64_t k = static_cast<std::int64_t>(hi - lo);
    const ModelParams& p = c.params;

    if (c.opts.truncate_depth) {
        const int m = *c.opts.truncate_depth;
        if (depth == m) return {0.0, false, cell_avg(c, x_lo, depth, a_local)};
        const bool uniform = k == 0 || pts[lo] == pts[hi - 1];
        if (uniform && depth >= c.opts.min_depth) {
            if (k == 0) return {0.0, false, cell_avg(c, x_lo, depth, a_local)};
            return group_truncated(c, k, pts[lo], x_lo, depth, a_local, m - depth);
        }
    } else {
        const bool uniform = k == 0 || pts[lo] == pts[hi - 1];
        if (uniform && depth >= c.opts.min_depth) {
            NodeOut out;
            if (k <= 1) {
                out.log_p = 0.0;
            } else if (is_heavy(k, p)) {
                out.flagged = true;
                out.log_p = -static_cast<double>(depth) * log_wbar(k, p);
            } else {
                out.log_p = c.log_u - std::log1p(-std::exp(log_wbar(k, p)));
            }
            out.value = k == 0 ? cell_avg(c, x_lo, depth, a_local)
                               : group_moment(c, k, pts[lo], x_lo, depth, a_local);
            return out;
        }
    }

    const auto begin = pts.begin();
    const std::size_t mid = static_cast<std::size_t>(
        std::lower_bound(begin + static_cast<std::ptrdiff_t>(lo),
                         begin + static_cast<std::ptrdiff_t>(hi), 0.5) -
        begin);
    for (std::size_t i = lo; i < mid; ++i) pts[i] = 2.0 * pts[i];
    for (std::size_t i = mid; i < hi; ++i) pts[i] = 2.0 * pts[i] - 1.0;

    const double half = std::ldexp(1.0, -(depth + 1));
    const NodeOut left =
        recurse(pts, lo, mid, depth + 1, x_lo, 2.0 * a_local, c);
    const NodeOut right =
        recurse(pts, mid, hi, depth + 1, x_lo + half, 2.0 * a_local - 1.0, c);

    const std::int64_t n0 = static_cast<std::int64_t>(mid - lo);
    const std::int64_t n1 = static_cast<std::int64_t>(hi - mid);
    NodeOut out;
    const double t = left.log_p + right.log_p - log_weight(n0, n1, p.alpha);
    out.flagged = left.flagged || right.flagged;
    out.log_p = out.flagged ? std::log(p.s) + t : log_mix(t, p);
    const double g = out.flagged ? 1.0 : -std::expm1(c.log_u - out.log_p);
    const double nd = static_cast<double>(n0 + n1) + 2.0 * p.alpha;
    const double r0 = (static_cast<double>(n0) + p.alpha) / nd;
    const double r1 = (static_cast<double>(n1) + p.alpha) / nd;
    out.value = (1.0 - g) * cell_avg(c, x_lo, depth, a_local) +
                g * (r0 * left.value + r1 * right.value);
    return out;
}

}  // namespace

double moment(const Dataset& data, const MomentSpec& spec, const ModelParams& params,
              const EngineOptions& opts) {
    if (spec.kind == MomentSpec::Kind::power &&
        (spec.exponent < 0 || spec.exponent > 100))
        throw std::domain_error("power exponent must be in [0, 100]");
    if (spec.kind == MomentSpec::Kind::indicator &&
        !(spec.threshold >= 0.0 && spec.threshold <= 1.0))
        throw std::domain_error("indicator threshold must lie in [0, 1]");
    if (opts.min_depth < 0) throw std::domain_error("min_depth must be >= 0");
    if (opts.depth_cap < 1) throw std::domain_error("depth_cap must be >= 1");
    if (opts.truncate_depth && *opts.truncate_depth < 0)
        throw std::domain_error("truncate_depth must be >= 0");
    Ctx c;
    c.params = params;
    c.opts = opts;
    c.spec = spec;
    c.log_u = std::log(params.u);
    std::vector<double> scratch = data.points();
    return recurse(scratch, 0, scratch.size(), 0, 0.0, spec.threshold, c).value;
}

}  // namespace bayestree
