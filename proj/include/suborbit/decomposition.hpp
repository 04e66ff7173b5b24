#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "suborbit/seq_vector.hpp"

namespace suborbit {

/// Finite section of an atomic system: K vectors truncated to the first
/// `dimension` coordinates, with the claimed decomposition bounds.
struct AtomicSystem {
    std::int64_t dimension = 0;
    std::vector<SeqVector> vectors;
    double p = 2.0;
    double A = 1.0;
    double B = 1.0;
};

/// Perturbation envelope: (A / (1 + eps B), B / (1 - eps B)).
/// Requires 0 < eps < 1/B.
std::pair<double, double> perturbed_bounds(double A, double B, double epsilon);

/// Closeness condition behind the perturbation result: with q the conjugate
/// exponent of p, (sum_k err_k^q)^{1/q} <= eps and eps < 1/B.
/// For p = 1 the conjugate norm is the supremum of the errors.
bool check_closeness(const std::vector<double>& suborbit_errors, double p, double epsilon,
                     double B);

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Extremal singular values of the K x D analysis matrix (rows are the
/// truncated vectors): for p = 2 these are the frame bounds of the finite
/// section. Rank-deficient systems report lower = 0 rather than erroring.
FrameBounds frame_bounds_p2(const AtomicSystem& system);

/// Rank completeness of the truncated system (p = 2 only): the smallest
/// singular value exceeds tol, so the section spans all D coordinates.
bool is_complete_p2(const AtomicSystem& system, double tol = 1e-9);

} // namespace suborbit
