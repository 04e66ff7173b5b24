#pragma once

#include <cstdint>

#include "suborbit/space.hpp"

namespace suborbit {

struct ShiftNorms {
    double left = 1.0;
    double right = 1.0;
};

/// Exact operator norms of the left/right shifts on the space's basis:
/// canonical mode uses the ratio-supremum formulas, scaled mode gives 1.
ShiftNorms shift_norms(const WeightedLpSpace& space);

/// A sparse vector together with an exact integer power of lambda.
///
/// The scalar lambda^exponent is kept symbolic so that compositions like
/// T^a S^b cancel exponents in integer arithmetic; it is multiplied into
/// the coefficients only on materialization.
struct PoweredVector {
    SeqVector coeffs;
    double lambda = 1.0;
    std::int64_t exponent = 0;

    /// log of the carried scalar, for norm bookkeeping.
    double log_scale() const;

    /// coeffs with lambda^exponent multiplied in. Uses a per-coefficient
    /// log-domain path when the scalar alone leaves double range; throws
    /// ScaleRangeError only if a materialized coefficient would overflow.
    SeqVector materialize() const;
};

/// The weighted shift pair T = lambda L (expanding) and S = lambda^{-1} R
/// (contracting) on a fixed space. Requires lambda > ||R|| so ||S|| < 1.
class ShiftOperators {
public:
    ShiftOperators(WeightedLpSpace space, double lambda);

    /// lambda = ||R|| * (1 + margin); the default margin keeps ||S|| = 2/3.
    static ShiftOperators with_default_lambda(WeightedLpSpace space, double margin = 0.5);

    const WeightedLpSpace& space() const { return space_; }
    double lambda() const { return lambda_; }
    double norm_left() const { return norms_.left; }
    double norm_right() const { return norms_.right; }
    double norm_contraction() const { return norms_.right / lambda_; } // ||S||
    double norm_expansion_bound() const { return lambda_ * norms_.left; } // ||T|| <=

private:
    WeightedLpSpace space_;
    double lambda_;
    ShiftNorms norms_;
};

/// L^n: coefficient at j comes from j + n; indices falling below 1 vanish.
SeqVector left_shift_pow(const SeqVector& v, std::int64_t n);
/// R^n: coefficient at j moves to j + n.
SeqVector right_shift_pow(const SeqVector& v, std::int64_t n);

/// T^n v = lambda^n L^n v with the scalar kept as an integer exponent.
PoweredVector t_pow(const ShiftOperators& ops, const SeqVector& v, std::int64_t n);
PoweredVector t_pow(const ShiftOperators& ops, const PoweredVector& v, std::int64_t n);
/// S^n v = lambda^{-n} R^n v.
PoweredVector s_pow(const ShiftOperators& ops, const SeqVector& v, std::int64_t n);
PoweredVector s_pow(const ShiftOperators& ops, const PoweredVector& v, std::int64_t n);

struct PRieszSample {
    double lower_bound_upper_estimate = 0.0; // smallest observed ratio: certified upper bound for A
    double upper_bound_lower_estimate = 0.0; // largest observed ratio: certified lower bound for B
};

/// Diagnostic sampling of ||sum c_k e_k|| / (sum |c_k|^p)^{1/p} over random
/// finite coefficient vectors. In scaled mode every ratio is exactly 1.
PRieszSample sample_priesz_bounds(const WeightedLpSpace& space, int trials, int max_dim,
                                  std::uint64_t seed = 0x5eed5eedULL);

} // namespace suborbit
