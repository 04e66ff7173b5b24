#include <doctest.h>

#include <cmath>
#include <random>

#include "suborbit/construct.hpp"
#include "suborbit/errors.hpp"

using namespace suborbit;

namespace {

WeightedLpSpace flat_l2() {
    return {2.0, WeightSequence::constant(1.0), BasisMode::Canonical};
}

/// The acceptance-3 setup: l2, w = 1, f_k = e_k, lambda = 4, eps_k = 2^{-k}.
struct CanonicalFixture {
    WeightedLpSpace space = flat_l2();
    ShiftOperators ops{space, 4.0};
    ErrorBudget budget = make_budget_simple(1.0);
    std::vector<SeqVector> family;
    PowerSchedule schedule;

    explicit CanonicalFixture(std::int64_t K) {
        FiniteFamilyData data;
        for (std::int64_t k = 1; k <= K; ++k) {
            family.push_back(SeqVector::unit(k, 1.0));
            data.supports.push_back(k);
            data.norms.push_back(1.0);
        }
        schedule = schedule_finite(data, ops.norm_contraction(), budget, K);
    }
};

SeqVector random_family_member(std::mt19937_64& rng, int max_support) {
    std::uniform_int_distribution<int> idx(1, max_support);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    SeqVector v;
    const int nnz = 1 + idx(rng) % 4;
    for (int t = 0; t < nnz; ++t) {
        const double c = val(rng);
        if (c != 0.0) v.set(idx(rng), c);
    }
    if (v.empty()) v.set(1, 0.5);
    return v;
}

} // namespace

TEST_CASE("generator materialization: pair list to explicit coefficients") {
    CanonicalFixture fx(3);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    const auto phi = materialize_generator(orbit);
    // S^{alpha(j)} e_j = lambda^{-alpha(j)} e_{j + alpha(j)}
    REQUIRE(phi.support_size() == 3);
    CHECK(phi.at(2) == doctest::Approx(std::pow(4.0, -1.0)).epsilon(1e-15));
    CHECK(phi.at(5) == doctest::Approx(std::pow(4.0, -3.0)).epsilon(1e-15));
    CHECK(phi.at(9) == doctest::Approx(std::pow(4.0, -6.0)).epsilon(1e-15));
}

TEST_CASE("empty truncation gives the zero vector and the full tail bound") {
    CanonicalFixture fx(3);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family, 0);
    CHECK(materialize_generator(orbit).empty());
    double full = 0.0;
    for (std::int64_t j = 1; j <= 3; ++j) {
        full += std::pow(0.25, static_cast<double>(fx.schedule.alpha(j)));
    }
    CHECK(orbit.truncation_tail_bound == doctest::Approx(full).epsilon(1e-12));
}

TEST_CASE("truncation bound stays within half the remaining budget") {
    CanonicalFixture fx(12);
    for (std::int64_t N : {4LL, 8LL, 11LL}) {
        const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family, N);
        CHECK(orbit.truncation_tail_bound <= 0.5 * fx.budget.tail(N));
    }
}

TEST_CASE("suborbit evaluation: canonical example k = 1, N = 3") {
    CanonicalFixture fx(3);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    const auto got = evaluate_suborbit(orbit, 1);
    REQUIRE(got.support_size() == 3);
    CHECK(got.at(1) == 1.0);
    CHECK(got.at(4) == doctest::Approx(std::pow(4.0, -2.0)).epsilon(1e-15));
    CHECK(got.at(8) == doctest::Approx(std::pow(4.0, -5.0)).epsilon(1e-15));
}

TEST_CASE("suborbit evaluation: single member reproduces itself exactly") {
    WeightedLpSpace space = flat_l2();
    ShiftOperators ops(space, 2.0);
    PowerSchedule sched;
    sched.alphas = {5};
    sched.thresholds = {0.0};
    sched.binding = {"fixed"};
    SeqVector f;
    f.set(2, 0.75);
    f.set(6, -0.25);
    const auto orbit = build_orbit(ops, sched, {f});
    CHECK(evaluate_suborbit(orbit, 1) == f); // exponents cancel exactly
}

TEST_CASE("terms with annihilated support vanish identically") {
    CanonicalFixture fx(6);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    for (std::int64_t k = 2; k <= 6; ++k) {
        for (std::int64_t j = 1; j < k; ++j) {
            // T^{alpha(k)} S^{alpha(j)} f_j = 0 because the increments
            // exceed the support bound N(j)
            const auto term = t_pow(fx.ops, s_pow(fx.ops, fx.family[j - 1],
                                                  fx.schedule.alpha(j)),
                                    fx.schedule.alpha(k));
            CHECK(term.coeffs.empty());
        }
    }
}

TEST_CASE("suborbit index range is validated") {
    CanonicalFixture fx(3);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    CHECK_THROWS_AS(evaluate_suborbit(orbit, 0), InvalidInputError);
    CHECK_THROWS_AS(evaluate_suborbit(orbit, 4), InvalidInputError);
}

TEST_CASE("naive oracle equals the stable path on random finite families") {
    WeightedLpSpace space = flat_l2();
    ShiftOperators ops(space, 2.0);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t K = 1 + trial % 5;
        FiniteFamilyData data;
        std::vector<SeqVector> family;
        for (std::int64_t k = 1; k <= K; ++k) {
            family.push_back(random_family_member(rng, 6));
            data.supports.push_back(std::max<std::int64_t>(1, family.back().max_index()));
            data.norms.push_back(norm(space, family.back()));
        }
        const auto sched = schedule_finite(data, ops.norm_contraction(),
                                           make_budget_simple(1.0), K);
        const auto orbit = build_orbit(ops, sched, family);
        for (std::int64_t k = 1; k <= K; ++k) {
            const auto fast = evaluate_suborbit(orbit, k);
            const auto slow = evaluate_suborbit_naive(orbit, k);
            const double denom = std::max(norm(space, slow), 1e-300);
            CHECK(norm(space, fast - slow) / denom <= 1e-10);
        }
    }
}

TEST_CASE("naive oracle edge cases") {
    WeightedLpSpace space = flat_l2();
    ShiftOperators ops(space, 2.0);

    // alpha(1) = 0 returns phi itself
    PowerSchedule sched;
    sched.alphas = {0, 4};
    sched.thresholds = {0, 0};
    sched.binding = {"fixed", "fixed"};
    std::vector<SeqVector> family{SeqVector::unit(1, 1.0), SeqVector::unit(2, 1.0)};
    const auto orbit = build_orbit(ops, sched, family);
    CHECK(evaluate_suborbit_naive(orbit, 1) == materialize_generator(orbit));

    // zero family stays zero
    SeqVector z;
    PowerSchedule zs;
    zs.alphas = {1};
    zs.thresholds = {0};
    zs.binding = {"fixed"};
    const auto zorbit = build_orbit(ops, zs, {z});
    CHECK(evaluate_suborbit_naive(zorbit, 1).empty());
    CHECK(evaluate_suborbit(zorbit, 1).empty());

    // out-of-range lambda powers are an explicit error
    PowerSchedule big;
    big.alphas = {2000};
    big.thresholds = {0};
    big.binding = {"fixed"};
    const auto borbit = build_orbit(ops, big, {SeqVector::unit(1, 1.0)});
    CHECK_THROWS_AS(evaluate_suborbit_naive(borbit, 1), ScaleRangeError);
    CHECK_THROWS_AS(materialize_generator(borbit), ScaleRangeError);
}

TEST_CASE("verify_bounds: canonical fixture meets every budget tail") {
    CanonicalFixture fx(12);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    const auto report = verify_bounds(orbit, fx.budget, fx.space);
    REQUIRE(report.rows.size() == 12);
    for (const auto& row : report.rows) {
        CHECK(row.pass);
        CHECK(row.allowance == 0.0);
        CHECK(row.actual <= row.bound); // strict, no allowance needed
    }
    CHECK(report.max_ratio < 1.0); // the proofs leave slack
}

TEST_CASE("verify_bounds: parallel evaluation gives identical rows") {
    CanonicalFixture fx(12);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    const auto seq = verify_bounds(orbit, fx.budget, fx.space, 1);
    const auto par = verify_bounds(orbit, fx.budget, fx.space, 4);
    REQUIRE(seq.rows.size() == par.rows.size());
    for (std::size_t i = 0; i < seq.rows.size(); ++i) {
        CHECK(seq.rows[i].actual == par.rows[i].actual);
        CHECK(seq.rows[i].allowance == par.rows[i].allowance);
    }
}

TEST_CASE("exact single-member representation has zero error") {
    CanonicalFixture fx(1);
    const auto orbit = build_orbit(fx.ops, fx.schedule, fx.family);
    const auto report = verify_bounds(orbit, fx.budget, fx.space);
    CHECK(report.rows[0].actual == 0.0);
    CHECK(report.rows[0].pass);
}

TEST_CASE("error is monotone non-increasing in the truncation index") {
    CanonicalFixture fx(10);
    const auto full = verify_bounds(build_orbit(fx.ops, fx.schedule, fx.family, 10),
                                    fx.budget, fx.space);
    const auto part = verify_bounds(build_orbit(fx.ops, fx.schedule, fx.family, 6),
                                    fx.budget, fx.space);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(full.rows[i].actual <= part.rows[i].actual + 1e-12);
    }
    // truncated members are covered by the allowance column
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(part.rows[i].allowance > 0.0);
        CHECK(part.rows[i].pass);
    }
}

TEST_CASE("closeness aggregates (variant i) for p in {1, 2, 3}") {
    CanonicalFixture fx(12);
    const auto report = verify_bounds(build_orbit(fx.ops, fx.schedule, fx.family),
                                      fx.budget, fx.space);
    for (double p : {1.0, 2.0, 3.0}) {
        const auto close = eps_close_simple(report, fx.budget, p);
        CHECK(close.pass);
        CHECK(close.rhs == doctest::Approx(1.0 / (std::pow(2.0, p) - 1.0)).epsilon(1e-15));
        CHECK(close.lhs <= close.rhs);
    }
}

TEST_CASE("closeness in the weighted variant: w_k = 2^k, p = 2, M = 1") {
    WeightedLpSpace space(2.0, WeightSequence::geometric(2.0), BasisMode::Scaled);
    ShiftOperators ops(space, 4.0);
    const auto weights = WeightSequence::geometric(2.0);
    const auto budget = make_budget_weighted(1.0, 2.0, weights);
    CHECK(budget.normalization == 1.0);

    FiniteFamilyData data;
    std::vector<SeqVector> family;
    for (std::int64_t k = 1; k <= 12; ++k) {
        family.push_back(SeqVector::unit(k, 1.0));
        data.supports.push_back(k);
        data.norms.push_back(1.0);
    }
    const auto sched = schedule_finite(data, ops.norm_contraction(), budget, 12);
    const auto report = verify_bounds(build_orbit(ops, sched, family), budget, space);
    const auto close = eps_close_weighted(report, budget, 2.0, weights);
    CHECK(close.pass);
    CHECK(close.lhs <= 1.0);

    const auto close_iii = eps_close_space_norm(report, budget, space);
    CHECK(close_iii.pass);
}

TEST_CASE("all-zero errors pass every closeness variant") {
    ErrorReport report;
    report.rows.push_back({1, 0, 0.0, 0.5, 0.0, true});
    const auto budget = make_budget_simple(1.0);
    CHECK(eps_close_simple(report, budget, 1.0).pass);
    CHECK(eps_close_weighted(report, budget, 2.0, WeightSequence::constant(1.0)).pass);
    CHECK(eps_close_space_norm(report, budget, {2.0, WeightSequence::constant(1.0)}).pass);
}

TEST_CASE("family shape validation") {
    CanonicalFixture fx(3);
    auto fam = fx.family;
    fam.pop_back();
    CHECK_THROWS_AS(build_orbit(fx.ops, fx.schedule, fam), InvalidInputError);
    CHECK_THROWS_AS(build_orbit(fx.ops, fx.schedule, fx.family, 7), InvalidInputError);
}
