#include "suborbit/construct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <string>

#include "suborbit/errors.hpp"

namespace suborbit {

namespace {

/// c * lambda^exponent without forming lambda^exponent when it alone
/// would leave double range.
double scale_coefficient(double c, double lambda, std::int64_t exponent) {
    const double log_scale = static_cast<double>(exponent) * std::log(lambda);
    if (std::abs(log_scale) < 600.0) {
        return c * std::pow(lambda, static_cast<double>(exponent));
    }
    if (c == 0.0) return 0.0;
    const double lv = log_scale + std::log(std::abs(c));
    if (lv > 700.0) {
        throw ScaleRangeError("suborbit term coefficient exceeds double range");
    }
    return std::copysign(std::exp(lv), c);
}

} // namespace

OrbitRepresentation build_orbit(const ShiftOperators& ops, const PowerSchedule& schedule,
                                std::vector<SeqVector> family, std::int64_t trunc_index) {
    const std::int64_t K = schedule.size();
    if (static_cast<std::int64_t>(family.size()) != K) {
        throw InvalidInputError("family length must match the schedule length");
    }
    if (trunc_index < 0) trunc_index = K;
    if (trunc_index > K) {
        throw InvalidInputError("truncation index must not exceed the family length");
    }
    for (const auto& f : family) {
        if (f.decay()) {
            throw InvalidInputError("orbit families must be finitely supported");
        }
    }

    OrbitRepresentation orbit{ops, schedule, std::move(family), trunc_index, 0.0};
    const double ln_S = std::log(ops.norm_contraction());
    for (std::int64_t j = trunc_index + 1; j <= K; ++j) {
        const double fj = norm(ops.space(), orbit.family[j - 1]);
        if (fj > 0.0) {
            orbit.truncation_tail_bound +=
                std::exp(static_cast<double>(schedule.alpha(j)) * ln_S + std::log(fj));
        }
    }
    return orbit;
}

SeqVector materialize_generator(const OrbitRepresentation& orbit) {
    SeqVector phi;
    for (std::int64_t j = 1; j <= orbit.trunc_index; ++j) {
        PoweredVector term = s_pow(orbit.ops, orbit.family[j - 1], orbit.schedule.alpha(j));
        phi += term.materialize();
    }
    return phi;
}

SeqVector evaluate_suborbit(const OrbitRepresentation& orbit, std::int64_t k) {
    if (k < 1 || k > orbit.schedule.size()) {
        throw InvalidInputError("suborbit index k=" + std::to_string(k)
                                + " outside the schedule range");
    }
    const std::int64_t alpha_k = orbit.schedule.alpha(k);
    std::map<std::int64_t, double> acc;
    for (std::int64_t j = 1; j <= orbit.trunc_index; ++j) {
        const std::int64_t shift = orbit.schedule.alpha(j) - alpha_k; // up if positive
        for (const auto& [i, c] : orbit.family[j - 1].coefficients()) {
            const std::int64_t target = i + shift;
            if (target < 1) continue; // annihilated by the left shift
            acc[target] += scale_coefficient(c, orbit.ops.lambda(), -shift);
        }
    }
    return SeqVector(std::move(acc));
}

SeqVector evaluate_suborbit_naive(const OrbitRepresentation& orbit, std::int64_t k) {
    if (k < 1 || k > orbit.schedule.size()) {
        throw InvalidInputError("suborbit index outside the schedule range");
    }
    const double ln_lambda = std::log(orbit.ops.lambda());
    const std::int64_t alpha_max = orbit.schedule.alpha(orbit.schedule.size());
    if (static_cast<double>(alpha_max) * std::abs(ln_lambda) > 690.0) {
        throw ScaleRangeError("lambda^alpha leaves double range; use evaluate_suborbit");
    }

    SeqVector phi;
    for (std::int64_t j = 1; j <= orbit.trunc_index; ++j) {
        SeqVector term = right_shift_pow(orbit.family[j - 1], orbit.schedule.alpha(j));
        term *= std::pow(orbit.ops.lambda(), -static_cast<double>(orbit.schedule.alpha(j)));
        phi += term;
    }
    for (std::int64_t step = 0; step < orbit.schedule.alpha(k); ++step) {
        phi = left_shift_pow(phi, 1);
        phi *= orbit.ops.lambda();
    }
    return phi;
}

namespace {

ErrorRow error_row(const OrbitRepresentation& orbit, const ErrorBudget& budget,
                   const WeightedLpSpace& space, std::int64_t k) {
    ErrorRow row;
    row.k = k;
    row.alpha = orbit.schedule.alpha(k);
    row.actual = norm(space, orbit.family[k - 1] - evaluate_suborbit(orbit, k));
    row.bound = budget.tail(k);

    // Omitted family members j > max(N, k) would have contributed
    // S^{alpha(j)-alpha(k)} f_j; bound them term-wise.
    const double ln_S = std::log(orbit.ops.norm_contraction());
    for (std::int64_t j = std::max(orbit.trunc_index, k) + 1; j <= orbit.schedule.size(); ++j) {
        const double fj = norm(space, orbit.family[j - 1]);
        if (fj > 0.0) {
            row.allowance += std::exp(
                static_cast<double>(orbit.schedule.alpha(j) - row.alpha) * ln_S + std::log(fj));
        }
    }
    row.pass = row.actual <= row.bound + row.allowance;
    return row;
}

} // namespace

ErrorReport verify_bounds(const OrbitRepresentation& orbit, const ErrorBudget& budget,
                          const WeightedLpSpace& space, int jobs) {
    const std::int64_t K = orbit.schedule.size();
    ErrorReport report;
    report.rows.resize(static_cast<std::size_t>(K));

    if (jobs <= 1) {
        for (std::int64_t k = 1; k <= K; ++k) {
            report.rows[k - 1] = error_row(orbit, budget, space, k);
        }
    } else {
        std::vector<std::future<void>> tasks;
        std::atomic<std::int64_t> next{1};
        const int workers = std::min<std::int64_t>(jobs, K);
        tasks.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&] {
                for (std::int64_t k = next.fetch_add(1); k <= K; k = next.fetch_add(1)) {
                    report.rows[k - 1] = error_row(orbit, budget, space, k);
                }
            }));
        }
        for (auto& t : tasks) t.get();
    }

    for (const auto& row : report.rows) {
        report.max_ratio = std::max(report.max_ratio, row.actual / row.bound);
    }
    return report;
}

namespace {

double beyond_k_tail_p(const ErrorBudget& budget, double p, const WeightSequence* weights,
                       std::int64_t K) {
    // sum_{k>K} tail(k)^p * w_k, the certified contribution of the
    // (hypothetical) members beyond the provided prefix
    const double scale = std::pow(budget.epsilon / budget.normalization, p);
    const double x = std::pow(2.0, -p);
    if (weights) return scale * weights->weighted_power_sum(x, K + 1);
    return scale * WeightSequence::constant(1.0).weighted_power_sum(x, K + 1);
}

} // namespace

ClosenessCheck eps_close_simple(const ErrorReport& report, const ErrorBudget& budget, double p) {
    ClosenessCheck out;
    double sum = 0.0;
    for (const auto& row : report.rows) sum += std::pow(row.actual, p);
    sum += beyond_k_tail_p(budget, p, nullptr, static_cast<std::int64_t>(report.rows.size()));
    out.lhs = sum;
    out.rhs = std::pow(budget.epsilon, p) / (std::pow(2.0, p) - 1.0);
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

ClosenessCheck eps_close_weighted(const ErrorReport& report, const ErrorBudget& budget,
                                  double p, const WeightSequence& weights) {
    ClosenessCheck out;
    double sum = 0.0;
    std::int64_t k = 1;
    for (const auto& row : report.rows) sum += std::pow(row.actual, p) * weights.at(k++);
    sum += beyond_k_tail_p(budget, p, &weights, static_cast<std::int64_t>(report.rows.size()));
    out.lhs = sum;
    out.rhs = std::pow(budget.epsilon, p);
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

ClosenessCheck eps_close_space_norm(const ErrorReport& report, const ErrorBudget& budget,
                                    const WeightedLpSpace& xd) {
    ClosenessCheck out;
    const double p = xd.p();
    double sum = 0.0;
    std::int64_t k = 1;
    for (const auto& row : report.rows) sum += std::pow(row.actual, p) * xd.weights().at(k++);
    sum += beyond_k_tail_p(budget, p, &xd.weights(), static_cast<std::int64_t>(report.rows.size()));
    out.lhs = std::pow(sum, 1.0 / p);
    out.rhs = budget.epsilon;
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

} // namespace suborbit
