#include "suborbit/shifts.hpp"

#include <cmath>
#include <random>
#include <string>

#include "suborbit/errors.hpp"

namespace suborbit {

ShiftNorms shift_norms(const WeightedLpSpace& space) {
    if (space.basis_mode() == BasisMode::Scaled) {
        return {1.0, 1.0};
    }
    const double inv_p = 1.0 / space.p();
    return {std::pow(space.weights().sup_ratio_down(), inv_p),
            std::pow(space.weights().sup_ratio_up(), inv_p)};
}

double PoweredVector::log_scale() const {
    return static_cast<double>(exponent) * std::log(lambda);
}

SeqVector PoweredVector::materialize() const {
    const double ls = log_scale();
    SeqVector out;
    if (std::abs(ls) < 600.0) {
        const double scale = std::exp(ls);
        for (const auto& [k, c] : coeffs.coefficients()) out.set(k, c * scale);
        return out;
    }
    for (const auto& [k, c] : coeffs.coefficients()) {
        const double lv = ls + std::log(std::abs(c));
        if (lv > 700.0) {
            throw ScaleRangeError("materialized coefficient exceeds double range; "
                                  "keep the lazy representation instead");
        }
        if (lv < -745.0) {
            throw ScaleRangeError("materialized coefficient underflows double range; "
                                  "keep the lazy representation instead");
        }
        out.set(k, std::copysign(std::exp(lv), c));
    }
    return out;
}

ShiftOperators::ShiftOperators(WeightedLpSpace space, double lambda)
    : space_(std::move(space)), lambda_(lambda), norms_(shift_norms(space_)) {
    if (!std::isfinite(lambda) || !(lambda > norms_.right)) {
        throw PreconditionError("lambda must exceed the right-shift norm ("
                                + std::to_string(lambda) + " <= "
                                + std::to_string(norms_.right)
                                + "); the contraction S = R/lambda needs norm < 1");
    }
}

ShiftOperators ShiftOperators::with_default_lambda(WeightedLpSpace space, double margin) {
    const double r = shift_norms(space).right;
    return ShiftOperators(std::move(space), r * (1.0 + margin));
}

SeqVector left_shift_pow(const SeqVector& v, std::int64_t n) {
    if (n < 0) throw InvalidInputError("shift power must be nonnegative");
    if (v.decay()) throw InvalidInputError("shifts act on finitely supported vectors");
    SeqVector out;
    for (const auto& [k, c] : v.coefficients()) {
        if (k - n >= 1) out.set(k - n, c);
    }
    return out;
}

SeqVector right_shift_pow(const SeqVector& v, std::int64_t n) {
    if (n < 0) throw InvalidInputError("shift power must be nonnegative");
    if (v.decay()) throw InvalidInputError("shifts act on finitely supported vectors");
    SeqVector out;
    for (const auto& [k, c] : v.coefficients()) {
        out.set(k + n, c);
    }
    return out;
}

PoweredVector t_pow(const ShiftOperators& ops, const SeqVector& v, std::int64_t n) {
    return {left_shift_pow(v, n), ops.lambda(), n};
}

PoweredVector t_pow(const ShiftOperators& ops, const PoweredVector& v, std::int64_t n) {
    return {left_shift_pow(v.coeffs, n), ops.lambda(), v.exponent + n};
}

PoweredVector s_pow(const ShiftOperators& ops, const SeqVector& v, std::int64_t n) {
    return {right_shift_pow(v, n), ops.lambda(), -n};
}

PoweredVector s_pow(const ShiftOperators& ops, const PoweredVector& v, std::int64_t n) {
    return {right_shift_pow(v.coeffs, n), ops.lambda(), v.exponent - n};
}

PRieszSample sample_priesz_bounds(const WeightedLpSpace& space, int trials, int max_dim,
                                  std::uint64_t seed) {
    if (trials < 1 || max_dim < 1) {
        throw InvalidInputError("trials and max_dim must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim_dist(1, max_dim);
    std::uniform_real_distribution<double> coef_dist(-1.0, 1.0);

    PRieszSample out;
    out.lower_bound_upper_estimate = std::numeric_limits<double>::infinity();
    out.upper_bound_lower_estimate = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int dim = dim_dist(rng);
        SeqVector v;
        double coef_p_sum = 0.0;
        for (int k = 1; k <= dim; ++k) {
            const double c = coef_dist(rng);
            if (c == 0.0) continue;
            v.set(k, c);
            coef_p_sum += std::pow(std::abs(c), space.p());
        }
        if (v.empty()) continue;
        const double ratio = norm(space, v) / std::pow(coef_p_sum, 1.0 / space.p());
        out.lower_bound_upper_estimate = std::min(out.lower_bound_upper_estimate, ratio);
        out.upper_bound_lower_estimate = std::max(out.upper_bound_lower_estimate, ratio);
    }
    return out;
}

} // namespace suborbit
