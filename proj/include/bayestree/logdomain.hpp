#ifndef BAYESTREE_LOGDOMAIN_HPP
#define BAYESTREE_LOGDOMAIN_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bayestree/params.hpp"

namespace bayestree {

// Nonnegative quantity stored in the log domain. Three states:
//   finite    -- value exp(log_), log_ is a real number
//   zero      -- exact zero (log would be -inf)
//   divergent -- true value +inf; log_ holds the log of a rescaled surrogate
//                that is only meaningful relative to another surrogate with
//                the identical divergence class.
class LogValue {
  public:
    LogValue() : log_(0.0), state_(State::finite) {}

    static LogValue from_log(double lg) { return LogValue(lg, State::finite); }
    static LogValue zero() { return LogValue(0.0, State::zero); }
    static LogValue divergent(double scaled_log) {
        return LogValue(scaled_log, State::divergent);
    }

    [[nodiscard]] bool is_finite() const { return state_ == State::finite; }
    [[nodiscard]] bool is_zero() const { return state_ == State::zero; }
    [[nodiscard]] bool is_divergent() const { return state_ == State::divergent; }

    // Log of the finite value. Invalid for zero/divergent states.
    [[nodiscard]] double log() const {
        if (state_ != State::finite)
            throw std::logic_error("log() on a non-finite LogValue");
        return log_;
    }

    // Log of the rescaled surrogate of a divergent value.
    [[nodiscard]] double scaled_log() const {
        if (state_ != State::divergent)
            throw std::logic_error("scaled_log() on a non-divergent LogValue");
        return log_;
    }

    // Plain-double view: exp(log), 0, or +inf.
    [[nodiscard]] double value() const {
        switch (state_) {
            case State::finite: return std::exp(log_);
            case State::zero: return 0.0;
            default: return std::numeric_limits<double>::infinity();
        }
    }

    friend LogValue operator*(const LogValue& a, const LogValue& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        if (a.is_divergent() || b.is_divergent())
            throw std::logic_error("LogValue product with a divergent operand");
        return from_log(a.log_ + b.log_);
    }

    friend LogValue operator/(const LogValue& a, const LogValue& b) {
        if (b.is_zero()) throw std::domain_error("LogValue division by zero");
        if (a.is_divergent() || b.is_divergent())
            throw std::logic_error(
                "LogValue quotient with a divergent operand; use ratio_of_scaled");
        if (a.is_zero()) return zero();
        return from_log(a.log_ - b.log_);
    }

  private:
    enum class State { finite, zero, divergent };
    LogValue(double lg, State st) : log_(lg), state_(st) {}
    double log_;
    State state_;
};

// log(u + s * e^t), evaluated from whichever term dominates so the result is
// stable for any t. For t far above the crossover this returns exactly
// t + log(s): the correction log1p(eps) vanishes below machine epsilon once
// s*e^t/u exceeds ~1e15.
inline double log_mix(double t, const ModelParams& p) {
    if (p.s == 0.0 || t == -std::numeric_limits<double>::infinity())
        return std::log(p.u);
    if (p.u == 0.0) return std::log(p.s) + t;
    const double split_log = std::log(p.s) + t;
    const double stay_log = std::log(p.u);
    if (split_log >= stay_log)
        return split_log + std::log1p(std::exp(stay_log - split_log));
    return stay_log + std::log1p(std::exp(split_log - stay_log));
}

}  // namespace bayestree

#endif
