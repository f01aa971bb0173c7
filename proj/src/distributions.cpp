#include "bayestree/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "bayestree/index.hpp"

namespace bayestree {

namespace {

void check_point(double x) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::domain_error("reference distributions live on [0, 1)");
}

// polynomial pieces written as explicit products: no std::pow, so results
// are identical on any IEEE-754 platform (the samplers promise this)
double beta36_pdf(double x) {
    const double y = 1.0 - x;
    const double y2 = y * y;
    return 168.0 * x * x * (y2 * y2 * y);
}

double beta36_cdf(double x) {
    // binomial tail: P[Bin(8, x) >= 3]
    const double y = 1.0 - x;
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
    const double y2 = y * y, y3 = y2 * y, y4 = y3 * y;
    return 56.0 * x3 * (y4 * y) + 70.0 * x4 * y4 + 56.0 * (x4 * x) * y3 +
           28.0 * (x4 * x2) * y2 + 8.0 * (x4 * x3) * y + (x4 * x4);
}

double beta36_icdf(double u) {
    if (u <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    double x = 1.0 / 3.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double f = beta36_cdf(x) - u;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        if (std::fabs(f) < 1e-15 || hi - lo < 1e-16) break;
        const double d = beta36_pdf(x);
        double next = d > 0.0 ? x - f / d : x;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

constexpr double kThird = 1.0 / 3.0;

}  // namespace

std::optional<RefDist> parse_dist(const std::string& name) {
    if (name == "beta36") return RefDist::beta36;
    if (name == "singular") return RefDist::singular;
    if (name == "linear") return RefDist::linear;
    if (name == "jump_half") return RefDist::jump_half;
    if (name == "jump_third") return RefDist::jump_third;
    return std::nullopt;
}

const char* dist_name(RefDist d) {
    switch (d) {
        case RefDist::beta36: return "beta36";
        case RefDist::singular: return "singular";
        case RefDist::linear: return "linear";
        case RefDist::jump_half: return "jump_half";
        case RefDist::jump_third: return "jump_third";
    }
    return "unknown";
}

double true_density(RefDist d, double x) {
    check_point(x);
    switch (d) {
        case RefDist::beta36: return beta36_pdf(x);
        case RefDist::singular: return 0.5 / std::sqrt(1.0 - x);
        case RefDist::linear: return 2.0 * x;
        case RefDist::jump_half: return x < 0.5 ? 1.8 : 0.2;
        case RefDist::jump_third: return x < kThird ? 1.5 : 0.75;
    }
    return 0.0;
}

double true_cdf(RefDist d, double x) {
    check_point(x);
    switch (d) {
        case RefDist::beta36: return beta36_cdf(x);
        case RefDist::singular: return 1.0 - std::sqrt(1.0 - x);
        case RefDist::linear: return x * x;
        case RefDist::jump_half: return x < 0.5 ? 1.8 * x : 0.9 + 0.2 * (x - 0.5);
        case RefDist::jump_third:
            return x < kThird ? 1.5 * x : 0.5 + 0.75 * (x - kThird);
    }
    return 0.0;
}

double inverse_cdf(RefDist d, double u) {
    if (!(u >= 0.0 && u < 1.0))
        throw std::domain_error("quantile argument must lie in [0, 1)");
    switch (d) {
        case RefDist::beta36: return beta36_icdf(u);
        case RefDist::singular: {
            const double r = 1.0 - u;
            return 1.0 - r * r;
        }
        case RefDist::linear: return std::sqrt(u);
        case RefDist::jump_half:
            return u < 0.9 ? u / 1.8 : 0.5 + (u - 0.9) / 0.2;
        case RefDist::jump_third:
            return u < 0.5 ? u / 1.5 : kThird + (u - 0.5) / 0.75;
    }
    return 0.0;
}

std::vector<double> sample(RefDist d, std::size_t n, std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(n);
    const double top = std::nextafter(1.0, 0.0);
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < n; ++i) {
        // SplitMix64: counter-based, splittable, bit-stable everywhere
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        out.push_back(std::min(inverse_cdf(d, u), top));
    }
    return out;
}

Dataset sample_dataset(RefDist d, std::size_t n, std::uint64_t seed) {
    return Dataset(sample(d, n, seed));
}

double l1_error(const Dataset& data, const ModelParams& params, RefDist d,
                int grid_size) {
    if (grid_size < 1) throw std::domain_error("grid_size must be >= 1");
    EngineOptions opts;
    opts.want_dim = false;
    const EvidenceIndex index = EvidenceIndex::build(data, params, opts);
    double total = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        total += std::fabs(index.query_density(x).value() - true_density(d, x));
    }
    return total / static_cast<double>(grid_size);
}

}  // namespace bayestree
