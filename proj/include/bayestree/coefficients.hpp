#ifndef BAYESTREE_COEFFICIENTS_HPP
#define BAYESTREE_COEFFICIENTS_HPP

#include <cstdint>
#include <vector>

#include "bayestree/params.hpp"

namespace bayestree {

// First n coefficients a_k = P[tree dimension == k] for an empty cell under
// the infinite-depth prior, via the convolution recursion
//   a_0 = u,  a_{k+1} = s * sum_{i=0}^{k} a_i a_{k-i}.
std::vector<double> prior_dim_coefficients(int n, const ModelParams& p);

// Same coefficients from the closed form a_k = 2u (-4su)^k binom(1/2, k+1),
// evaluated by the stable term ratio a_{k+1}/a_k = 4su (k + 1/2) / (k + 2).
// Kept as an independent route for cross-checking the recursion.
std::vector<double> prior_dim_coefficients_closed(int n, const ModelParams& p);

// Dimension distribution of a cell holding `mult` coincident points at
// infinite depth: c_0 = 1 - wt, c_{k+1} = wt * sum c_i a_{k-i} with
// wt = min(wbar(mult), 1). All-zero when the group is heavy. mult <= 1
// reduces to the prior coefficients.
std::vector<double> multipoint_dim_coefficients(int n, std::int64_t mult,
                                                const ModelParams& p);

// Double-point case of the above (the b_k series).
std::vector<double> double_point_dim_coefficients(int n, const ModelParams& p);

}  // namespace bayestree

#endif
