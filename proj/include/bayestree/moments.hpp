#ifndef BAYESTREE_MOMENTS_HPP
#define BAYESTREE_MOMENTS_HPP

#include "bayestree/dataset.hpp"
#include "bayestree/engine.hpp"
#include "bayestree/params.hpp"

namespace bayestree {

// Posterior expectation target E[ integral M(x) q(x) dx | D ].
struct MomentSpec {
    enum class Kind { power, indicator };
    Kind kind = Kind::power;
    int exponent = 1;       // power: M(x) = x^k, k >= 0
    double threshold = 0.0; // indicator: M(x) = 1{x <= a}

    static MomentSpec power(int k) {
        MomentSpec m;
        m.kind = Kind::power;
        m.exponent = k;
        return m;
    }
    static MomentSpec indicator(double a) {
        MomentSpec m;
        m.kind = Kind::indicator;
        m.threshold = a;
        return m;
    }
};

// Exact posterior moment. Finite for every dataset: the coincident-group tail
// recursion contracts by (n + alpha) / (n + 2 alpha) per level even when the
// evidence itself diverges.
double moment(const Dataset& data, const MomentSpec& spec, const ModelParams& params,
              const EngineOptions& opts = {});

}  // namespace bayestree

#endif
