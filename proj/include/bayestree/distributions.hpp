#ifndef BAYESTREE_DISTRIBUTIONS_HPP
#define BAYESTREE_DISTRIBUTIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bayestree/dataset.hpp"
#include "bayestree/params.hpp"

namespace bayestree {

// Reference densities on [0, 1) used to exercise the estimator.
//   beta36:     168 x^2 (1-x)^5                    (Beta(3, 6))
//   singular:   1 / (2 sqrt(1-x)), unbounded at 1
//   linear:     2x
//   jump_half:  9/5 on [0, 1/2), 1/5 on [1/2, 1)
//   jump_third: 3/2 on [0, 1/3), 3/4 on [1/3, 1)
enum class RefDist { beta36, singular, linear, jump_half, jump_third };

std::optional<RefDist> parse_dist(const std::string& name);
const char* dist_name(RefDist d);

double true_density(RefDist d, double x);
double true_cdf(RefDist d, double x);

// Quantile function; u in [0, 1). beta36 inverts its polynomial cdf by
// bracketed Newton iteration to 1e-14, the others are algebraic.
double inverse_cdf(RefDist d, double u);

// n inverse-cdf draws from a SplitMix64 stream seeded with `seed`. Output is
// bit-reproducible across platforms for a fixed seed.
std::vector<double> sample(RefDist d, std::size_t n, std::uint64_t seed);
Dataset sample_dataset(RefDist d, std::size_t n, std::uint64_t seed);

// Mean absolute deviation between the posterior predictive density of `data`
// and the reference density on the offset grid x_i = (i + 0.5) / grid_size.
double l1_error(const Dataset& data, const ModelParams& params, RefDist d,
                int grid_size);

}  // namespace bayestree

#endif
