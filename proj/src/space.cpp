#include "suborbit/space.hpp"

#include <algorithm>
#include <cmath>

#include "suborbit/errors.hpp"

namespace suborbit {

WeightedLpSpace::WeightedLpSpace(double p, WeightSequence weights, BasisMode mode)
    : p_(p), weights_(std::move(weights)), mode_(mode) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidInputError("exponent p must satisfy 1 <= p < infinity");
    }
}

double WeightedLpSpace::term_weight(std::int64_t k) const {
    return mode_ == BasisMode::Canonical ? weights_.at(k) : 1.0;
}

namespace {

/// sum_{j>=from} (C e^{-beta |j-center|})^p * term_weight(j), split into the
/// finite pre-center segment and the closed-form decaying remainder.
double envelope_p_sum(const WeightedLpSpace& space, const DecayProfile& d, std::int64_t from) {
    if (from < 1) from = 1;
    const double p = space.p();
    const double rate = d.beta * p;
    const double Cp = std::pow(d.C, p);

    double sum = 0.0;
    for (std::int64_t j = from; j < d.center; ++j) {
        sum += Cp * std::exp(-rate * static_cast<double>(d.center - j)) * space.term_weight(j);
    }
    const std::int64_t decaying_from = std::max(from, d.center);
    if (space.basis_mode() == BasisMode::Canonical) {
        sum += Cp * space.weights().weighted_decay_sum(rate, d.center, decaying_from);
    } else {
        sum += Cp * WeightSequence::constant(1.0).weighted_decay_sum(rate, d.center, decaying_from);
    }
    return sum;
}

/// p-th power sum over stored coefficients with index >= from, factored by
/// the largest term so tiny vectors do not underflow to zero.
double stored_p_sum(const WeightedLpSpace& space, const SeqVector& v, std::int64_t from) {
    const double p = space.p();
    double peak = 0.0;
    for (const auto& [k, c] : v.coefficients()) {
        if (k < from) continue;
        peak = std::max(peak, std::abs(c) * std::pow(space.term_weight(k), 1.0 / p));
    }
    if (peak == 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& [k, c] : v.coefficients()) {
        if (k < from) continue;
        const double t = std::abs(c) * std::pow(space.term_weight(k), 1.0 / p) / peak;
        sum += std::pow(t, p);
    }
    return std::pow(peak, p) * sum;
}

} // namespace

double norm(const WeightedLpSpace& space, const SeqVector& v) {
    double sum = stored_p_sum(space, v, 1);
    if (v.decay()) {
        sum += envelope_p_sum(space, *v.decay(), v.max_index() + 1);
    }
    return std::pow(sum, 1.0 / space.p());
}

TailNorm tail_norm(const WeightedLpSpace& space, const SeqVector& v, std::int64_t from_index) {
    if (from_index < 1) throw InvalidInputError("from_index must be >= 1");
    double sum = stored_p_sum(space, v, from_index);
    if (v.decay()) {
        sum += envelope_p_sum(space, *v.decay(), std::max(from_index, v.max_index() + 1));
    }
    TailNorm out;
    out.value = std::pow(sum, 1.0 / space.p());
    out.certified_upper_bound = v.decay()
        ? std::pow(envelope_p_sum(space, *v.decay(), from_index), 1.0 / space.p())
        : out.value;
    return out;
}

SeqVector scaled_basis_vector(const WeightedLpSpace& space, std::int64_t k) {
    if (k < 1) throw InvalidInputError("basis index must be >= 1");
    if (space.basis_mode() == BasisMode::Scaled) {
        return SeqVector::unit(k, 1.0);
    }
    return SeqVector::unit(k, std::pow(space.weights().at(k), -1.0 / space.p()));
}

} // namespace suborbit
