#include "suborbit/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "suborbit/errors.hpp"

namespace suborbit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double exact_halving(double base, std::int64_t j) {
    if (j > 4000) return 0.0;
    return std::ldexp(base, static_cast<int>(-j));
}

void validate_contraction(double norm_S) {
    if (!(norm_S > 0.0 && norm_S < 1.0)) {
        throw PreconditionError("contraction norm ||S|| must lie in (0, 1), got "
                                + std::to_string(norm_S));
    }
}

void validate_norms(const std::vector<double>& norms, std::int64_t K) {
    if (static_cast<std::int64_t>(norms.size()) < K || K < 1) {
        throw InvalidInputError("need one norm per family member, K >= 1");
    }
    for (double n : norms) {
        if (!(n >= 0.0) || !std::isfinite(n)) {
            throw InvalidInputError("family norms must be finite and nonnegative");
        }
    }
}

/// log(sum exp(terms)), max-factored.
double log_sum_exp(const std::vector<double>& terms) {
    double m = kNegInf;
    for (double t : terms) m = std::max(m, t);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

std::int64_t ceil_i64(double x) {
    return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t floor_plus_one(double x) {
    return static_cast<std::int64_t>(std::floor(x)) + 1;
}

} // namespace

double ErrorBudget::term(std::int64_t j) const {
    return exact_halving(epsilon / normalization, j);
}

double ErrorBudget::tail(std::int64_t k) const {
    return exact_halving(epsilon / normalization, k);
}

ErrorBudget make_budget_simple(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidInputError("epsilon must be positive and finite");
    }
    return {epsilon, 1.0, BudgetVariant::Simple};
}

ErrorBudget make_budget_weighted(double epsilon, double p, const WeightSequence& weights) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidInputError("epsilon must be positive and finite");
    }
    if (!(p >= 1.0)) throw InvalidInputError("p must be >= 1");
    const double sum = weights.weighted_power_sum(std::pow(2.0, -p), 1);
    return {epsilon, std::max(1.0, sum), BudgetVariant::Weighted};
}

ErrorBudget make_budget_space_norm(double epsilon, const WeightedLpSpace& xd) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidInputError("epsilon must be positive and finite");
    }
    const double sum = xd.weights().weighted_power_sum(std::pow(2.0, -xd.p()), 1);
    return {epsilon, std::pow(sum, 1.0 / xd.p()), BudgetVariant::SpaceNorm};
}

// ------------------------------------------------------------- finite ----

namespace {

double finite_log_term(const ErrorBudget& budget, double fk_norm, double ln_S, std::int64_t k) {
    if (fk_norm == 0.0) return kNegInf; // constraint vacuous for zero vectors
    return (std::log(budget.term(k)) - std::log(fk_norm)) / ln_S;
}

} // namespace

PowerSchedule schedule_finite(const FiniteFamilyData& family, double norm_S,
                              const ErrorBudget& budget, std::int64_t K) {
    validate_contraction(norm_S);
    validate_norms(family.norms, K);
    if (static_cast<std::int64_t>(family.supports.size()) < K) {
        throw InvalidInputError("need one support bound per family member");
    }
    for (std::int64_t n : family.supports) {
        if (n < 1) throw InvalidInputError("support bounds N(k) must be >= 1");
    }
    const double ln_S = std::log(norm_S);

    PowerSchedule out;
    out.kind = ScheduleKind::Finite;

    const double r1 = std::max(finite_log_term(budget, family.norms[0], ln_S, 1),
                               static_cast<double>(family.supports[0]));
    out.alphas.push_back(std::max<std::int64_t>(ceil_i64(std::max(r1, 0.0)), 0));
    out.thresholds.push_back(r1);
    out.binding.push_back("first_term_floor");

    for (std::int64_t k = 2; k <= K; ++k) {
        const double decay = finite_log_term(budget, family.norms[k - 1], ln_S, k);
        const auto n_prev = static_cast<double>(family.supports[k - 2]);
        const auto n_curr = static_cast<double>(family.supports[k - 1]);
        double best = decay;
        const char* label = "decay";
        if (n_prev > best) { best = n_prev; label = "support_prev"; }
        if (n_curr > best) { best = n_curr; label = "support_curr"; }
        std::int64_t inc = ceil_i64(best);
        if (inc < 1) { inc = 1; label = "strict_increase"; }
        out.alphas.push_back(out.alphas.back() + inc);
        out.thresholds.push_back(best);
        out.binding.emplace_back(label);
    }
    return out;
}

std::vector<std::string> check_finite_schedule(const std::vector<std::int64_t>& alphas,
                                               const FiniteFamilyData& family, double norm_S,
                                               const ErrorBudget& budget) {
    std::vector<std::string> violations;
    const auto K = static_cast<std::int64_t>(alphas.size());
    if (K == 0) return {"empty schedule"};
    const double ln_S = std::log(norm_S);

    if (alphas[0] < 0) violations.push_back("alpha(1) < 0");
    const double r1 = std::max(finite_log_term(budget, family.norms[0], ln_S, 1),
                               static_cast<double>(family.supports[0]));
    if (static_cast<double>(alphas[0]) < r1) {
        violations.push_back("alpha(1) below first-term floor r_1");
    }
    for (std::int64_t k = 2; k <= K; ++k) {
        const auto inc = alphas[k - 1] - alphas[k - 2];
        if (inc < 1) {
            violations.push_back("schedule not strictly increasing at k=" + std::to_string(k));
            continue;
        }
        const double required = std::max({finite_log_term(budget, family.norms[k - 1], ln_S, k),
                                          static_cast<double>(family.supports[k - 2]),
                                          static_cast<double>(family.supports[k - 1])});
        if (static_cast<double>(inc) < required) {
            violations.push_back("increment at k=" + std::to_string(k)
                                 + " below the decay/support bound");
        }
    }
    return violations;
}

// ---------------------------------------------------------- localized ----

namespace {

void validate_localized(const LocalizedParams& p) {
    validate_contraction(p.norm_S);
    if (!(p.beta > std::log(p.lambda))) {
        throw PreconditionError("coefficient decay too slow: beta must exceed ln(lambda), got beta="
                                + std::to_string(p.beta) + ", ln(lambda)="
                                + std::to_string(std::log(p.lambda)));
    }
    if (!(p.C > 0.0) || !(p.B > 0.0) || !(p.xd_norm_exp_beta > 0.0)
        || !std::isfinite(p.C) || !std::isfinite(p.B) || !std::isfinite(p.xd_norm_exp_beta)) {
        throw InvalidInputError("localized schedule parameters must be positive and finite");
    }
}

/// Right side of the growth bound: the sum over already fixed powers is
/// evaluated as log-sum-exp of alpha(n)(beta - ln lambda) + beta n.
double localized_growth_rhs(const LocalizedParams& p, const ErrorBudget& budget,
                            const std::vector<std::int64_t>& alphas, std::int64_t k) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(k));
    if (p.include_zeroth_term) terms.push_back(0.0); // alpha(0) := 0, e^{beta*0}
    const double beta_minus_lnl = p.beta - std::log(p.lambda);
    for (std::int64_t n = 1; n < k; ++n) {
        terms.push_back(static_cast<double>(alphas[n - 1]) * beta_minus_lnl
                        + p.beta * static_cast<double>(n));
    }
    const double lse = log_sum_exp(terms);
    return (std::log(budget.tail(k)) - std::log(p.xd_norm_exp_beta) - lse
            - std::log(2.0 * p.B * p.C))
           / (std::log(p.lambda) - p.beta);
}

std::int64_t localized_increment_floor(const LocalizedParams& p, const ErrorBudget& budget,
                                       double fk_norm, std::int64_t k, const char** label) {
    std::int64_t inc = 1;
    *label = "strict_increase";
    if (fk_norm > 0.0) {
        const std::int64_t inc_decay =
            ceil_i64((std::log(budget.term(k) / 2.0) - std::log(fk_norm)) / std::log(p.norm_S));
        if (inc_decay > inc) { inc = inc_decay; *label = "half_budget_decay"; }
    }
    if (k - 2 > inc) { inc = k - 2; *label = "index_growth"; }
    return inc;
}

} // namespace

PowerSchedule schedule_localized(const LocalizedParams& params, const std::vector<double>& norms,
                                 const ErrorBudget& budget, std::int64_t K) {
    validate_localized(params);
    validate_norms(norms, K);

    PowerSchedule out;
    out.kind = ScheduleKind::Localized;
    out.alphas.push_back(0); // fixed by the construction
    out.thresholds.push_back(0.0);
    out.binding.push_back("fixed_zero");

    for (std::int64_t k = 2; k <= K; ++k) {
        const char* label = nullptr;
        const std::int64_t inc = localized_increment_floor(params, budget, norms[k - 1], k, &label);
        const std::int64_t from_increment = out.alphas.back() + inc;
        const double rhs = localized_growth_rhs(params, budget, out.alphas, k);
        const std::int64_t from_growth = floor_plus_one(rhs);

        if (from_growth > from_increment) {
            out.alphas.push_back(from_growth);
            out.binding.emplace_back("log_growth");
        } else {
            out.alphas.push_back(from_increment);
            out.binding.emplace_back(label);
        }
        out.thresholds.push_back(rhs);
    }
    return out;
}

std::vector<std::string> check_localized_schedule(const std::vector<std::int64_t>& alphas,
                                                  const LocalizedParams& params,
                                                  const std::vector<double>& norms,
                                                  const ErrorBudget& budget) {
    std::vector<std::string> violations;
    const auto K = static_cast<std::int64_t>(alphas.size());
    if (K == 0) return {"empty schedule"};
    if (alphas[0] != 0) violations.push_back("alpha(1) must be 0");

    for (std::int64_t k = 2; k <= K; ++k) {
        const auto inc = alphas[k - 1] - alphas[k - 2];
        if (inc < 1) {
            violations.push_back("schedule not strictly increasing at k=" + std::to_string(k));
            continue;
        }
        if (norms[k - 1] > 0.0) {
            const double required = (std::log(budget.term(k) / 2.0) - std::log(norms[k - 1]))
                                    / std::log(params.norm_S);
            if (static_cast<double>(inc) < required) {
                violations.push_back("half-budget decay step fails at k=" + std::to_string(k));
            }
        }
        if (inc < k - 2) {
            violations.push_back("index-growth floor fails at k=" + std::to_string(k));
        }
        std::vector<std::int64_t> prefix(alphas.begin(), alphas.begin() + (k - 1));
        const double rhs = localized_growth_rhs(params, budget, prefix, k);
        if (!(static_cast<double>(alphas[k - 1]) > rhs)) {
            violations.push_back("logarithmic growth bound fails at k=" + std::to_string(k));
        }
    }
    return violations;
}

// ----------------------------------------------------------- function ----

namespace {

void validate_function_params(const FunctionScheduleParams& p) {
    validate_contraction(p.norm_S);
    if (!(p.mu > p.lambda * p.norm_T_minus1)) {
        throw PreconditionError("growth condition fails: mu must exceed lambda * ||T_{-1}||, got mu="
                                + std::to_string(p.mu) + " <= "
                                + std::to_string(p.lambda * p.norm_T_minus1));
    }
}

double function_growth_rhs(const FunctionScheduleParams& p, const std::vector<double>& C_ks,
                           const ErrorBudget& budget, const std::vector<std::int64_t>& alphas,
                           std::int64_t k) {
    const double ln_rho = std::log(p.mu / (p.lambda * p.norm_T_minus1));
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(k - 1));
    for (std::int64_t n = 1; n < k; ++n) {
        terms.push_back(std::log(C_ks[n - 1]) + static_cast<double>(alphas[n - 1]) * ln_rho);
    }
    const double lse = log_sum_exp(terms);
    if (lse == kNegInf) return kNegInf;
    return (std::log(2.0) + lse - std::log(budget.tail(k))) / ln_rho;
}

} // namespace

PowerSchedule schedule_function(const FunctionScheduleParams& params,
                                const std::vector<double>& norms,
                                const std::vector<std::int64_t>& a_ks,
                                const std::vector<double>& C_ks,
                                const ErrorBudget& budget, std::int64_t K) {
    validate_function_params(params);
    validate_norms(norms, K);
    if (static_cast<std::int64_t>(a_ks.size()) < K
        || static_cast<std::int64_t>(C_ks.size()) < K) {
        throw InvalidInputError("need one certificate (C_k, a_k) per family member");
    }
    for (std::int64_t a : a_ks) {
        if (a < 0) throw InvalidInputError("certificate cutoffs a_k must be nonnegative");
    }
    for (double c : C_ks) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw InvalidInputError("certificate constants C_k must be positive and finite");
        }
    }

    PowerSchedule out;
    out.kind = ScheduleKind::FunctionSpace;
    out.alphas.push_back(0);
    out.thresholds.push_back(0.0);
    out.binding.push_back("fixed_zero");

    for (std::int64_t k = 2; k <= K; ++k) {
        std::int64_t inc = 1;
        const char* label = "strict_increase";
        if (norms[k - 1] > 0.0) {
            // strict inequality: realized as floor + 1, integer ties go up
            const std::int64_t inc_decay = floor_plus_one(
                (std::log(budget.term(k) / 2.0) - std::log(norms[k - 1])) / std::log(params.norm_S));
            if (inc_decay > inc) { inc = inc_decay; label = "half_budget_decay"; }
        }
        if (a_ks[k - 2] > inc) { inc = a_ks[k - 2]; label = "tail_cutoff"; }
        const std::int64_t from_increment = out.alphas.back() + inc;

        const double rhs = function_growth_rhs(params, C_ks, budget, out.alphas, k);
        const std::int64_t from_growth = rhs == kNegInf
            ? std::numeric_limits<std::int64_t>::min() : ceil_i64(rhs);

        if (from_growth > from_increment) {
            out.alphas.push_back(from_growth);
            out.binding.emplace_back("log_growth");
        } else {
            out.alphas.push_back(from_increment);
            out.binding.emplace_back(label);
        }
        out.thresholds.push_back(rhs);
    }
    return out;
}

std::vector<std::string> check_function_schedule(const std::vector<std::int64_t>& alphas,
                                                 const FunctionScheduleParams& params,
                                                 const std::vector<double>& norms,
                                                 const std::vector<std::int64_t>& a_ks,
                                                 const std::vector<double>& C_ks,
                                                 const ErrorBudget& budget) {
    std::vector<std::string> violations;
    const auto K = static_cast<std::int64_t>(alphas.size());
    if (K == 0) return {"empty schedule"};
    if (alphas[0] != 0) violations.push_back("alpha(1) must be 0");

    for (std::int64_t k = 2; k <= K; ++k) {
        const auto inc = alphas[k - 1] - alphas[k - 2];
        if (inc < 1) {
            violations.push_back("schedule not strictly increasing at k=" + std::to_string(k));
            continue;
        }
        if (norms[k - 1] > 0.0) {
            const double required = (std::log(budget.term(k) / 2.0) - std::log(norms[k - 1]))
                                    / std::log(params.norm_S);
            if (!(static_cast<double>(inc) > required)) {
                violations.push_back("strict half-budget decay step fails at k=" + std::to_string(k));
            }
        }
        if (inc < a_ks[k - 2]) {
            violations.push_back("tail-cutoff increment fails at k=" + std::to_string(k));
        }
        std::vector<std::int64_t> prefix(alphas.begin(), alphas.begin() + (k - 1));
        const double rhs = function_growth_rhs(params, C_ks, budget, prefix, k);
        if (rhs != kNegInf && static_cast<double>(alphas[k - 1]) < rhs) {
            violations.push_back("logarithmic growth bound fails at k=" + std::to_string(k));
        }
    }
    return violations;
}

} // namespace suborbit
