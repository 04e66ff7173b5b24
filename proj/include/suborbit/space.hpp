#pragma once

#include <cstdint>

#include "suborbit/seq_vector.hpp"
#include "suborbit/weights.hpp"

namespace suborbit {

/// Which family the coefficients of a SeqVector refer to.
///
/// Canonical: the unit vectors delta_k, so ||v||^p = sum |c_k|^p w_k.
/// Scaled:    e_k = w_k^{-1/p} delta_k, so the norm of a coefficient
///            vector is its plain l^p norm.
enum class BasisMode { Canonical, Scaled };

/// Weighted l^p sequence space (1 <= p < infinity) with a fixed basis mode.
class WeightedLpSpace {
public:
    WeightedLpSpace(double p, WeightSequence weights, BasisMode mode = BasisMode::Canonical);

    double p() const { return p_; }
    const WeightSequence& weights() const { return weights_; }
    BasisMode basis_mode() const { return mode_; }

    /// Effective weight applied to the |c_k|^p terms in this basis mode.
    double term_weight(std::int64_t k) const;

private:
    double p_;
    WeightSequence weights_;
    BasisMode mode_;
};

struct TailNorm {
    double value = 0.0;
    double certified_upper_bound = 0.0;
};

/// l^p_w norm of v in the space's basis mode. A decay profile contributes
/// its envelope tail beyond the stored support, summed in closed form.
double norm(const WeightedLpSpace& space, const SeqVector& v);

/// Norm of v restricted to indices >= from_index, paired with an
/// envelope-only upper bound when a decay profile is present.
TailNorm tail_norm(const WeightedLpSpace& space, const SeqVector& v, std::int64_t from_index);

/// k-th unit-norm basis vector in the space's coefficient convention.
SeqVector scaled_basis_vector(const WeightedLpSpace& space, std::int64_t k);

} // namespace suborbit
