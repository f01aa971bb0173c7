#ifndef BAYESTREE_SPECIAL_HPP
#define BAYESTREE_SPECIAL_HPP

#include <cstdint>

#include "bayestree/params.hpp"

namespace bayestree {

// log Gamma(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

// Log of the split weight
//   w(n0, n1) = 2^-(n0+n1) * G(n+2a) / (G(n0+a) G(n1+a)) * G(a)^2 / G(2a)
// appearing in the evidence recursion. Symmetric in (n0, n1); w(0,0) = 1.
double log_weight(std::int64_t n0, std::int64_t n1, double alpha);

// Log of wbar(n) = s / w(n, 0), the per-level factor of the evidence chain of
// a cell all of whose n points coincide. For alpha == 1 and small n this is
// evaluated as s * 2^n / (n+1) in exact double arithmetic so the boundary
// wbar == 1 is classified exactly.
double log_wbar(std::int64_t n, const ModelParams& p);

// Whether a multiplicity-n coincident group makes the evidence diverge:
// wbar > 1 (exponential) or wbar == 1 with u > 0 (linear). A band of 1e-9
// around log wbar == 0 absorbs log-gamma roundoff on the generic-alpha path.
bool is_heavy(std::int64_t n, const ModelParams& p);

// c_alpha = 4^(alpha-1) G(alpha)^2 / G(2a), the constant in the balanced-count
// weight asymptotics w_n ~ c_alpha * sqrt(2n/pi); c_1 = 1.
double c_alpha(double alpha);

}  // namespace bayestree

#endif
