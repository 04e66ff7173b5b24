#pragma once

#include <cstdint>
#include <vector>

namespace suborbit {

/// Positive weight sequence {w_k}_{k>=1} of one of the closed-form kinds.
///
/// The kinds are chosen so that the quantities the library needs -- the
/// ratio suprema sup_{k>=2} w_{k-1}/w_k (and its reciprocal orientation)
/// and weighted geometric series sum_{k>=J} x^k w_k -- are computable
/// exactly, not by numeric truncation.
class WeightSequence {
public:
    enum class Kind { Constant, Geometric, Power, Table };

    static WeightSequence constant(double value);
    /// w_k = ratio^k
    static WeightSequence geometric(double ratio);
    /// w_k = k^s
    static WeightSequence power(double exponent);
    /// explicit prefix w_1..w_n, then w_k = tail for k > n
    static WeightSequence table(std::vector<double> prefix, double tail);

    Kind kind() const { return kind_; }
    double at(std::int64_t k) const;

    /// sup_{k>=2} w_{k-1}/w_k. Throws UnboundedOperatorError naming "L"
    /// when the supremum is not finite.
    double sup_ratio_down() const;
    /// sup_{k>=2} w_k/w_{k-1}. Throws naming "R" when not finite.
    double sup_ratio_up() const;

    /// sum_{k=from}^inf x^k w_k for 0 < x < 1, evaluated in closed form
    /// (Constant/Geometric/Table) or by certified geometric-majorant
    /// summation (Power). Throws UnsupportedWeightError when divergent.
    double weighted_power_sum(double x, std::int64_t from) const;

    /// sum_{k=from}^inf exp(-rate * (k - center)) w_k for rate > 0, with the
    /// exponent offset folded in before exponentiation so large centers do
    /// not overflow. Same divergence rules as weighted_power_sum.
    double weighted_decay_sum(double rate, std::int64_t center, std::int64_t from) const;

    double parameter() const { return param_; }
    const std::vector<double>& prefix() const { return prefix_; }

private:
    WeightSequence(Kind kind, double param, std::vector<double> prefix = {});

    Kind kind_;
    double param_ = 1.0;          // value / ratio / exponent / tail
    std::vector<double> prefix_;  // Table only
};

} // namespace suborbit
