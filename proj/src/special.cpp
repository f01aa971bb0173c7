#include "bayestree/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bayestree {

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma requires x > 0");
    return std::lgamma(x);
}

double log_weight(std::int64_t n0, std::int64_t n1, double alpha) {
    if (n0 < 0 || n1 < 0) throw std::domain_error("log_weight requires n0, n1 >= 0");
    const double a = alpha;
    const double n = static_cast<double>(n0 + n1);
    // canonical order makes the function bitwise symmetric in (n0, n1);
    // grouped so equal terms cancel exactly when a count is zero
    const double lo = static_cast<double>(std::min(n0, n1));
    const double hi = static_cast<double>(std::max(n0, n1));
    return (log_gamma(n + 2.0 * a) - log_gamma(2.0 * a)) -
           (log_gamma(lo + a) - log_gamma(a)) -
           (log_gamma(hi + a) - log_gamma(a)) - n * M_LN2;
}

double log_wbar(std::int64_t n, const ModelParams& p) {
    if (n < 0) throw std::domain_error("log_wbar requires n >= 0");
    if (p.alpha == 1.0 && n <= 50) {
        // s 2^n / (n+1): every factor exact in double arithmetic here, so the
        // boundary cases (e.g. s=1/2, n=3 -> 1) classify without roundoff
        const double wbar = p.s * std::ldexp(1.0, static_cast<int>(n)) /
                            static_cast<double>(n + 1);
        return std::log(wbar);
    }
    return std::log(p.s) - log_weight(n, 0, p.alpha);
}

bool is_heavy(std::int64_t n, const ModelParams& p) {
    if (p.s == 0.0) return false;
    const double lw = log_wbar(n, p);
    constexpr double band = 1e-9;  // absorbs log-gamma roundoff at wbar == 1
    if (lw > band) return true;
    if (lw < -band) return false;
    return p.u > 0.0;
}

double c_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("c_alpha requires alpha > 0");
    return std::exp((alpha - 1.0) * std::log(4.0) + 2.0 * log_gamma(alpha) -
                    log_gamma(2.0 * alpha));
}

}  // namespace bayestree
