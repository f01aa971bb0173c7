#include "bayestree/coefficients.hpp"

#include <cmath>

#include "bayestree/special.hpp"

namespace bayestree {

std::vector<double> prior_dim_coefficients(int n, const ModelParams& p) {
    if (n <= 0) return {};
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    a[0] = p.u;
    for (int k = 1; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += a[i] * a[k - 1 - i];
        a[k] = p.s * acc;
    }
    return a;
}

std::vector<double> prior_dim_coefficients_closed(int n, const ModelParams& p) {
    if (n <= 0) return {};
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    a[0] = p.u;
    // a_k = 2u (-4su)^k binom(1/2, k+1) via the positive term ratio
    const double r = 4.0 * p.s * p.u;
    for (int k = 0; k + 1 < n; ++k)
        a[k + 1] = a[k] * r * (k + 0.5) / (k + 2.0);
    return a;
}

std::vector<double> multipoint_dim_coefficients(int n, std::int64_t mult,
                                                const ModelParams& p) {
    if (mult <= 1) return prior_dim_coefficients(n, p);
    if (n <= 0) return {};
    const double wt = is_heavy(mult, p) ? 1.0 : std::exp(log_wbar(mult, p));
    const auto a = prior_dim_coefficients(n, p);
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    c[0] = 1.0 - wt;
    for (int k = 1; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += c[i] * a[k - 1 - i];
        c[k] = wt * acc;
    }
    return c;
}

std::vector<double> double_point_dim_coefficients(int n, const ModelParams& p) {
    return multipoint_dim_coefficients(n, 2, p);
}

}  // namespace bayestree
