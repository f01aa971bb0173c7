#include "bayestree/index.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "bayestree/errors.hpp"
#include "bayestree/special.hpp"

namespace bayestree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double raw_log(const LogValue& v) {
    if (v.is_divergent()) return v.scaled_log();
    if (v.is_zero()) return -kInf;
    return v.log();
}

// split probability of a stored cell, recovered from its evidence
double node_split_prob(const IndexNode& node, const ModelParams& p) {
    if (node.flagged) return 1.0;
    return -std::expm1(std::log(p.u) - node.log_p);
}

void check_point(double x) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::domain_error("query point must lie in [0, 1)");
}

// infinite-depth evidence of a cell holding m coincident points, at `depth`
// (scaled surrogate when the group is heavy)
std::pair<double, bool> closed_cell(std::int64_t m, int depth, const ModelParams& p) {
    if (m <= 1) return {0.0, false};
    if (is_heavy(m, p))
        return {-static_cast<double>(depth) * log_wbar(m, p), true};
    return {std::log(p.u) - std::log1p(-std::exp(log_wbar(m, p))), false};
}

// posterior mean mass below a, inside a cell holding k coincident points at v.
// Walks the coincident chain; a and v transform exactly, so `a == 0` is an
// exact fixed point where every remaining contribution vanishes.
double group_cdf(double a, double v, std::int64_t k, const ModelParams& p) {
    const double g =
        k <= 1 ? p.s : std::min(std::exp(log_wbar(k, p)), 1.0);
    const double denom = static_cast<double>(k) + 2.0 * p.alpha;
    const double r_with = (static_cast<double>(k) + p.alpha) / denom;
    const double r_empty = p.alpha / denom;
    double acc = 1.0;
    double total = 0.0;
    for (int iter = 0; iter < 4000 && a != 0.0 && acc > 1e-18; ++iter) {
        total += acc * (1.0 - g) * a;
        const bool a_left = a < 0.5;
        const bool v_left = v < 0.5;
        if (a_left != v_left) {
            if (a_left)
                total += acc * g * r_empty * (2.0 * a);
            else
                total += acc * g * (r_with + r_empty * (2.0 * a - 1.0));
            return total;
        }
        if (!a_left) total += acc * g * r_empty;  // empty left sibling, wholly below a
        acc *= g * r_with;
        a = a_left ? 2.0 * a : 2.0 * a - 1.0;
        v = v_left ? 2.0 * v : 2.0 * v - 1.0;
    }
    return total;
}

}  // namespace

LogValue EvidenceIndex::log_evidence() const {
    const IndexNode& r = root();
    return r.flagged ? LogValue::divergent(r.log_p) : LogValue::from_log(r.log_p);
}

LogValue EvidenceIndex::augmented_log_evidence(double x, int copies) const {
    check_point(x);
    if (copies < 1) throw std::domain_error("copies must be >= 1");
    const ModelParams& p = params_;
    const double log_s = std::log(p.s);

    // descend to the terminal cell containing x, recording the path
    std::vector<std::pair<int, bool>> path;
    int cur = 0;
    double xl = x;
    while (!nodes_[static_cast<std::size_t>(cur)].terminal) {
        const IndexNode& node = nodes_[static_cast<std::size_t>(cur)];
        const bool left = xl < 0.5;
        path.emplace_back(cur, left);
        xl = left ? 2.0 * xl : 2.0 * xl - 1.0;
        cur = left ? node.left : node.right;
    }
    const IndexNode leaf = nodes_[static_cast<std::size_t>(cur)];

    double log_p;
    bool flag;
    if (leaf.n == 0 || xl == leaf.value) {
        // the inserted copies join (or form) the cell's coincident group
        std::tie(log_p, flag) = closed_cell(leaf.n + copies, leaf.depth, p);
    } else {
        // the copies separate from the stored group somewhere below this cell
        int l = 0;
        double a = leaf.value;
        double b = xl;
        while ((a < 0.5) == (b < 0.5)) {
            a = a < 0.5 ? 2.0 * a : 2.0 * a - 1.0;
            b = b < 0.5 ? 2.0 * b : 2.0 * b - 1.0;
            ++l;
            if (leaf.depth + l + 1 > depth_cap_) throw depth_cap_error(depth_cap_);
        }
        const auto [lp_group, fl_group] = closed_cell(leaf.n, leaf.depth + l + 1, p);
        const auto [lp_x, fl_x] = closed_cell(copies, leaf.depth + l + 1, p);
        flag = fl_group || fl_x;
        double t = lp_group + lp_x - log_weight(leaf.n, copies, p.alpha);
        log_p = flag ? log_s + t : log_mix(t, p);
        const double lw_solo = log_weight(leaf.n + copies, 0, p.alpha);
        for (int j = 0; j < l; ++j) {
            t = log_p - lw_solo;  // the empty sibling contributes log 1
            log_p = flag ? log_s + t : log_mix(t, p);
        }
    }

    // fold back up along the stored path, reusing the untouched siblings
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        const IndexNode& node = nodes_[static_cast<std::size_t>(it->first)];
        const IndexNode& lc = nodes_[static_cast<std::size_t>(node.left)];
        const IndexNode& rc = nodes_[static_cast<std::size_t>(node.right)];
        const IndexNode& sib = it->second ? rc : lc;
        const std::int64_t nl = lc.n + (it->second ? copies : 0);
        const std::int64_t nr = rc.n + (it->second ? 0 : copies);
        const double t = log_p + sib.log_p - log_weight(nl, nr, p.alpha);
        flag = flag || sib.flagged;
        log_p = flag ? log_s + t : log_mix(t, p);
    }
    return flag ? LogValue::divergent(log_p) : LogValue::from_log(log_p);
}

LogValue EvidenceIndex::query_density(double x) const {
    const LogValue aug = augmented_log_evidence(x, 1);
    const double ratio = raw_log(aug) - raw_log(log_evidence());
    // the ratio to p(D) is infinite exactly when the copy makes x's group heavy
    if (is_heavy(data_->count_of(x) + 1, params_))
        return LogValue::divergent(ratio);
    return LogValue::from_log(ratio);
}

ScalarOrDivergent EvidenceIndex::query_variance(double x) const {
    check_point(x);
    if (is_heavy(data_->count_of(x) + 2, params_)) return {kInf, true};
    const double le = raw_log(log_evidence());
    const double m1 = std::exp(raw_log(augmented_log_evidence(x, 1)) - le);
    const double m2 = std::exp(raw_log(augmented_log_evidence(x, 2)) - le);
    return {std::max(0.0, m2 - m1 * m1), false};
}

double EvidenceIndex::query_cdf(double a) const {
    if (!(a >= 0.0 && a <= 1.0))
        throw std::domain_error("cdf threshold must lie in [0, 1]");
    if (a == 1.0) return 1.0;
    const ModelParams& p = params_;
    double acc = 1.0;
    double total = 0.0;
    double al = a;
    int cur = 0;
    while (!nodes_[static_cast<std::size_t>(cur)].terminal) {
        const IndexNode& node = nodes_[static_cast<std::size_t>(cur)];
        const double g = node_split_prob(node, p);
        total += acc * (1.0 - g) * al;
        const IndexNode& lc = nodes_[static_cast<std::size_t>(node.left)];
        const IndexNode& rc = nodes_[static_cast<std::size_t>(node.right)];
        const double denom = static_cast<double>(node.n) + 2.0 * p.alpha;
        const double r0 = (static_cast<double>(lc.n) + p.alpha) / denom;
        const double r1 = (static_cast<double>(rc.n) + p.alpha) / denom;
        if (al < 0.5) {
            acc *= g * r0;
            al = 2.0 * al;
            cur = node.left;
        } else {
            total += acc * g * r0;
            acc *= g * r1;
            al = 2.0 * al - 1.0;
            cur = node.right;
        }
    }
    const IndexNode& leaf = nodes_[static_cast<std::size_t>(cur)];
    if (leaf.n == 0) return total + acc * al;
    return total + acc * group_cdf(al, leaf.value, leaf.n, p);
}

ScalarOrDivergent EvidenceIndex::query_height(double x) const {
    check_point(x);
    const ModelParams& p = params_;
    const double su = p.s / p.u;
    double h = 0.0;
    double prod = 1.0;
    double xl = x;
    int cur = 0;
    while (!nodes_[static_cast<std::size_t>(cur)].terminal) {
        const IndexNode& node = nodes_[static_cast<std::size_t>(cur)];
        const double g = node_split_prob(node, p);
        h += prod * g;
        prod *= g;
        if (prod == 0.0) return {h, false};
        if (xl < 0.5) {
            xl *= 2.0;
            cur = node.left;
        } else {
            xl = 2.0 * xl - 1.0;
            cur = node.right;
        }
    }
    const IndexNode& leaf = nodes_[static_cast<std::size_t>(cur)];
    if (leaf.n == 0 || xl == leaf.value) {
        if (leaf.n >= 2 && is_heavy(leaf.n, p)) return {kInf, true};
        const double wt = leaf.n <= 1 ? p.s : std::exp(log_wbar(leaf.n, p));
        const double total = h + prod * (wt / (1.0 - wt));
        return {total, !std::isfinite(total)};
    }
    // x rides alongside the coincident group until they part; beyond the
    // parting cell x sits in empty cells, whose expected height is s/u
    const double g =
        leaf.n <= 1 ? p.s : std::min(std::exp(log_wbar(leaf.n, p)), 1.0);
    double a = leaf.value;
    int guard = 0;
    while ((a < 0.5) == (xl < 0.5) && prod > 1e-18 && ++guard < 4000) {
        h += prod * g;
        prod *= g;
        a = a < 0.5 ? 2.0 * a : 2.0 * a - 1.0;
        xl = xl < 0.5 ? 2.0 * xl : 2.0 * xl - 1.0;
    }
    const double total = h + prod * g * (1.0 + su);
    return {total, !std::isfinite(total)};
}

LogValue predictive_density(const Dataset& data, double x, const ModelParams& params,
                            const EngineOptions& opts) {
    EngineOptions lean = opts;
    lean.want_dim = false;
    return EvidenceIndex::build(data, params, lean).query_density(x);
}

ScalarOrDivergent posterior_variance(const Dataset& data, double x,
                                     const ModelParams& params,
                                     const EngineOptions& opts) {
    EngineOptions lean = opts;
    lean.want_dim = false;
    return EvidenceIndex::build(data, params, lean).query_variance(x);
}

}  // namespace bayestree
