#include "bayestree/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <stdexcept>
#include <string>

#include "bayestree/errors.hpp"
#include "bayestree/special.hpp"

namespace bayestree {

double compactify(double x, CompactifyMode mode) {
    if (mode == CompactifyMode::reciprocal) {
        if (std::isnan(x) || !(x > 1.0))
            throw std::domain_error(
                "reciprocal compactification is defined on (1, inf]");
        return 1.0 / x;  // +inf -> 0
    }
    // rational: the increasing branch of (2y-1)/(y(1-y)) = x
    if (!std::isfinite(x))
        throw std::domain_error("rational compactification needs a finite value");
    if (x > 1e150) return 1.0 - 1.0 / x;  // x*x would overflow; 1 - 1/x to full precision
    if (x < -1e150) return -1.0 / x;
    const double root = std::sqrt(x * x + 4.0);
    // two algebraically equal forms, each stable on its own sign
    if (x <= 1.0) return 2.0 / (root + 2.0 - x);
    return ((x - 2.0) + root) / (2.0 * x);
}

Dataset::Dataset(std::vector<double> points) : points_(std::move(points)) {
    for (double v : points_)
        if (!(v >= 0.0 && v < 1.0))
            throw std::domain_error("dataset points must lie in [0, 1)");
    std::sort(points_.begin(), points_.end());
}

Dataset Dataset::load(std::istream& in, std::optional<CompactifyMode> mode) {
    std::vector<double> pts;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(first, last - first + 1);

        char* end = nullptr;
        double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size())
            throw parse_error("not a number: '" + token + "'", lineno);
        if (mode) {
            try {
                v = compactify(v, *mode);
            } catch (const std::domain_error& e) {
                throw parse_error(e.what(), lineno);
            }
        }
        if (!(v >= 0.0 && v < 1.0))
            throw parse_error("value outside [0, 1): '" + token + "'", lineno);
        pts.push_back(v);
    }
    return Dataset(std::move(pts));
}

std::int64_t Dataset::count_of(double x) const {
    const auto [lo, hi] = std::equal_range(points_.begin(), points_.end(), x);
    return hi - lo;
}

std::vector<std::pair<double, std::int64_t>> Dataset::multiplicities() const {
    std::vector<std::pair<double, std::int64_t>> runs;
    for (std::size_t i = 0; i < points_.size();) {
        std::size_t j = i;
        while (j < points_.size() && points_[j] == points_[i]) ++j;
        runs.emplace_back(points_[i], static_cast<std::int64_t>(j - i));
        i = j;
    }
    return runs;
}

std::pair<Dataset, Dataset> Dataset::partition() const {
    const auto mid = std::lower_bound(points_.begin(), points_.end(), 0.5);
    std::vector<double> left, right;
    left.reserve(mid - points_.begin());
    right.reserve(points_.end() - mid);
    // both maps are exact: doubling shifts the exponent, and Sterbenz applies
    // to 2x - 1 on [1, 2)
    for (auto it = points_.begin(); it != mid; ++it) left.push_back(2.0 * *it);
    for (auto it = mid; it != points_.end(); ++it) right.push_back(2.0 * *it - 1.0);
    return {Dataset(std::move(left)), Dataset(std::move(right))};
}

Dataset Dataset::with_inserted(double x, int copies) const {
    if (!(x >= 0.0 && x < 1.0))
        throw std::domain_error("inserted point must lie in [0, 1)");
    std::vector<double> pts = points_;
    pts.insert(std::lower_bound(pts.begin(), pts.end(), x), copies, x);
    return Dataset(std::move(pts));
}

DivergenceClass divergence_class(const Dataset& data, const ModelParams& params) {
    DivergenceClass cls;
    for (const auto& [value, mult] : data.multiplicities())
        if (is_heavy(mult, params)) cls.heavy.push_back({value, mult});
    return cls;
}

}  // namespace bayestree
