#ifndef BAYESTREE_PARAMS_HPP
#define BAYESTREE_PARAMS_HPP

#include <stdexcept>

namespace bayestree {

// Mixture parameters of the recursive-partition prior. A cell is uniform with
// probability u and splits into two halves with probability s; the split mass
// is drawn from a symmetric Beta(alpha, alpha). u is always derived as 1 - s
// so that u + s == 1 holds exactly.
struct ModelParams {
    double s = 0.5;
    double u = 0.5;
    double alpha = 1.0;

    static ModelParams create(double s, double alpha) {
        if (!(s >= 0.0 && s <= 1.0))
            throw std::domain_error("split probability s must lie in [0, 1]");
        if (!(alpha > 0.0))
            throw std::domain_error("alpha must be positive");
        ModelParams p;
        p.s = s;
        p.u = 1.0 - s;
        p.alpha = alpha;
        return p;
    }
};

}  // namespace bayestree

#endif
