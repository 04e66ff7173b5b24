#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "suborbit/space.hpp"

namespace suborbit {

/// How the per-step error budget eps_j = (eps/M) 2^{-j} was normalized.
enum class BudgetVariant { Simple, Weighted, SpaceNorm };

/// Geometric error budget. term(j) and tail(k) are exact binary scalings
/// of eps/M, so tails telescope exactly: tail(k) - tail(k+1) == term(k+1).
struct ErrorBudget {
    double epsilon = 1.0;
    double normalization = 1.0; // M
    BudgetVariant variant = BudgetVariant::Simple;

    double term(std::int64_t j) const;
    double tail(std::int64_t k) const; // sum_{j>k} term(j)
};

/// Variant with M = 1.
ErrorBudget make_budget_simple(double epsilon);
/// Variant with M = max{1, sum_k 2^{-kp} w_k}; throws UnsupportedWeightError
/// when the normalization series diverges.
ErrorBudget make_budget_weighted(double epsilon, double p, const WeightSequence& weights);
/// Variant with M = || {2^{-k}} ||_{X_d} for X_d a weighted l^p space.
ErrorBudget make_budget_space_norm(double epsilon, const WeightedLpSpace& xd);

enum class ScheduleKind { Finite, Localized, FunctionSpace };

/// Strictly increasing nonnegative powers alpha(1..K) together with the
/// recursion metadata that produced them.
struct PowerSchedule {
    ScheduleKind kind = ScheduleKind::Finite;
    std::vector<std::int64_t> alphas;     // alpha(k), k = 1..K
    std::vector<double> thresholds;       // binding real lower bound per k
    std::vector<std::string> binding;     // binding constraint label per k

    std::int64_t size() const { return static_cast<std::int64_t>(alphas.size()); }
    std::int64_t alpha(std::int64_t k) const { return alphas.at(static_cast<std::size_t>(k - 1)); }
};

/// Family data for the finite-support recursion: per-k largest occupied
/// basis index N(k) >= 1 and norms ||f_k||.
struct FiniteFamilyData {
    std::vector<std::int64_t> supports;
    std::vector<double> norms;
};

/// Minimal schedule with increments
///   alpha(k) - alpha(k-1) >= max{ (ln eps_k - ln||f_k||)/ln||S||, N(k-1), N(k) }
/// and alpha(1) = ceil(max{r_1, 0}) so the tail estimate holds from k = 1.
PowerSchedule schedule_finite(const FiniteFamilyData& family, double norm_S,
                              const ErrorBudget& budget, std::int64_t K);

struct LocalizedParams {
    double C = 1.0;
    double beta = 1.0;
    double lambda = 1.0;
    double norm_S = 0.5;
    double B = 1.0;
    double xd_norm_exp_beta = 1.0;  // || {e^{-beta j}} ||_{X_d}
    bool include_zeroth_term = true; // the n = 0 summand of the growth sum
};

/// Minimal schedule with alpha(1) = 0 and, for k >= 2, the smallest integer
/// satisfying the half-budget decay step, the index-growth floor
/// alpha(k) >= alpha(k-1) + k - 2, and strictly exceeding the logarithmic
/// growth bound with denominator ln(lambda) - beta.
PowerSchedule schedule_localized(const LocalizedParams& params, const std::vector<double>& norms,
                                 const ErrorBudget& budget, std::int64_t K);

struct FunctionScheduleParams {
    double norm_S = 0.5;
    double lambda = 1.0;
    double norm_T_minus1 = 1.0;
    double mu = 2.0;
};

/// Minimal schedule with alpha(1) = 0 and, for k >= 2, the smallest integer
/// satisfying the strict half-budget decay step, the certificate-cutoff
/// increments alpha(k+1) - alpha(k) >= a_k, and the logarithmic growth bound
/// with denominator ln(mu / (lambda ||T_{-1}||)).
PowerSchedule schedule_function(const FunctionScheduleParams& params,
                                const std::vector<double>& norms,
                                const std::vector<std::int64_t>& a_ks,
                                const std::vector<double>& C_ks,
                                const ErrorBudget& budget, std::int64_t K);

/// Replay checks: re-verify every defining inequality of the recursion that
/// produced a schedule. Returns human-readable violations; empty means pass.
std::vector<std::string> check_finite_schedule(const std::vector<std::int64_t>& alphas,
                                               const FiniteFamilyData& family, double norm_S,
                                               const ErrorBudget& budget);
std::vector<std::string> check_localized_schedule(const std::vector<std::int64_t>& alphas,
                                                  const LocalizedParams& params,
                                                  const std::vector<double>& norms,
                                                  const ErrorBudget& budget);
std::vector<std::string> check_function_schedule(const std::vector<std::int64_t>& alphas,
                                                 const FunctionScheduleParams& params,
                                                 const std::vector<double>& norms,
                                                 const std::vector<std::int64_t>& a_ks,
                                                 const std::vector<double>& C_ks,
                                                 const ErrorBudget& budget);

} // namespace suborbit
