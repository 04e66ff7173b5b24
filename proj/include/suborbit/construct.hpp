#pragma once

#include <cstdint>
#include <vector>

#include "suborbit/schedule.hpp"
#include "suborbit/shifts.hpp"

namespace suborbit {

/// Lazy representation of the generating vector phi = sum_j S^{alpha(j)} f_j
/// truncated at trunc_index, with a certified bound on the omitted terms.
///
/// phi is kept as the pair list (alpha(j), f_j): the suborbit evaluation
/// only ever needs exact integer exponent differences, and materializing
/// lambda^{-alpha(j)} would underflow for fast-growing schedules.
struct OrbitRepresentation {
    ShiftOperators ops;
    PowerSchedule schedule;
    std::vector<SeqVector> family;
    std::int64_t trunc_index = 0;       // N <= K
    double truncation_tail_bound = 0.0; // sum_{j>N} ||S||^{alpha(j)} ||f_j||
};

/// Validates shapes and computes the truncation bound. The family must be
/// finitely supported; trunc_index defaults to the full family.
OrbitRepresentation build_orbit(const ShiftOperators& ops, const PowerSchedule& schedule,
                                std::vector<SeqVector> family, std::int64_t trunc_index = -1);

/// Explicit coefficients of phi_N. Throws ScaleRangeError when a
/// materialized coefficient would leave double range.
SeqVector materialize_generator(const OrbitRepresentation& orbit);

/// T^{alpha(k)} phi_N evaluated term by term: each term is f_j shifted by
/// alpha(j) - alpha(k) (annihilating below index 1) and scaled by
/// lambda^{alpha(k) - alpha(j)}, an exact integer exponent.
SeqVector evaluate_suborbit(const OrbitRepresentation& orbit, std::int64_t k);

/// Oracle path: materializes phi_N densely and applies T literally
/// alpha(k) times. Only valid while lambda^{alpha} stays in double range.
SeqVector evaluate_suborbit_naive(const OrbitRepresentation& orbit, std::int64_t k);

struct ErrorRow {
    std::int64_t k = 0;
    std::int64_t alpha = 0;
    double actual = 0.0;
    double bound = 0.0;
    double allowance = 0.0;
    bool pass = false;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    double max_ratio = 0.0; // max actual/bound
};

/// Per-k check of || f_k - T^{alpha(k)} phi_N || against the budget tail,
/// with an allowance for family members omitted by the truncation.
/// jobs > 1 evaluates the (independent) k's in parallel; row order is fixed.
ErrorReport verify_bounds(const OrbitRepresentation& orbit, const ErrorBudget& budget,
                          const WeightedLpSpace& space, int jobs = 1);

struct ClosenessCheck {
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// sum_k err_k^p (plus the certified beyond-K budget tail) <= eps^p/(2^p - 1).
ClosenessCheck eps_close_simple(const ErrorReport& report, const ErrorBudget& budget, double p);
/// sum_k err_k^p w_k + certified tail <= eps^p.
ClosenessCheck eps_close_weighted(const ErrorReport& report, const ErrorBudget& budget,
                                  double p, const WeightSequence& weights);
/// || {err_k} ||_{X_d} including the certified tail <= eps.
ClosenessCheck eps_close_space_norm(const ErrorReport& report, const ErrorBudget& budget,
                                    const WeightedLpSpace& xd);

} // namespace suborbit
