#include <doctest.h>

#include <cmath>
#include <vector>

#include "suborbit/errors.hpp"
#include "suborbit/schedule.hpp"

using namespace suborbit;

namespace {

// the exponentially localized fixture family: coefficients e^{-2|j-k|}
// truncated at 1e-16, measured in l2 (width 18 keeps everything >= 1e-16)
std::vector<double> localized_fixture_norms(std::int64_t K) {
    const std::int64_t width = 18;
    std::vector<double> norms;
    for (std::int64_t k = 1; k <= K; ++k) {
        double sum = 0.0;
        for (std::int64_t j = std::max<std::int64_t>(1, k - width); j <= k + width; ++j) {
            const double c = std::exp(-2.0 * static_cast<double>(std::llabs(j - k)));
            sum += c * c;
        }
        norms.push_back(std::sqrt(sum));
    }
    return norms;
}

LocalizedParams localized_fixture_params() {
    LocalizedParams p;
    p.C = 1.0;
    p.beta = 2.0;
    p.lambda = std::exp(1.0);
    p.norm_S = 1.0 / std::exp(1.0);
    p.B = 1.0;
    p.xd_norm_exp_beta = std::sqrt(1.0 / (std::exp(4.0) - 1.0));
    return p;
}

FunctionScheduleParams function_fixture_params() {
    FunctionScheduleParams p;
    p.norm_S = 0.5;
    p.lambda = 2.0;
    p.norm_T_minus1 = 1.0;
    p.mu = 4.0;
    return p;
}

} // namespace

TEST_CASE("error budget: terms, tails, normalizations") {
    const auto b1 = make_budget_simple(1.0);
    CHECK(b1.term(3) == 0.125);
    CHECK(b1.tail(3) == 0.125);

    // variant (ii) with p = 1, w = 1: sum 2^{-k} = 1, so M = 1
    const auto b2 = make_budget_weighted(1.0, 1.0, WeightSequence::constant(1.0));
    CHECK(b2.normalization == doctest::Approx(1.0).epsilon(1e-15));

    // variant (iii) with X_d = l1 flat: same geometric sum
    const auto b3 = make_budget_space_norm(1.0, {1.0, WeightSequence::constant(1.0)});
    CHECK(b3.normalization == doctest::Approx(1.0).epsilon(1e-15));

    // w_k = 2^k, p = 2: sum 2^{-2k} 2^k = 1, M = max{1, 1} = 1
    const auto b4 = make_budget_weighted(1.0, 2.0, WeightSequence::geometric(2.0));
    CHECK(b4.normalization == doctest::Approx(1.0).epsilon(1e-15));

    // divergent normalization is a hard error
    CHECK_THROWS_AS(make_budget_weighted(1.0, 1.0, WeightSequence::geometric(4.0)),
                    UnsupportedWeightError);
}

TEST_CASE("budget tails telescope exactly") {
    for (double eps : {1.0, 0.3, 2.5e-3, 7.0}) {
        const auto b = make_budget_simple(eps);
        for (std::int64_t k = 1; k <= 60; ++k) {
            CHECK(b.tail(k) - b.tail(k + 1) == b.term(k + 1)); // bitwise
        }
    }
}

TEST_CASE("finite schedule: canonical fixture alpha(k) = k(k+1)/2") {
    FiniteFamilyData fam;
    for (std::int64_t k = 1; k <= 12; ++k) {
        fam.supports.push_back(k);
        fam.norms.push_back(1.0);
    }
    const auto sched = schedule_finite(fam, 0.25, make_budget_simple(1.0), 12);
    REQUIRE(sched.size() == 12);
    for (std::int64_t k = 1; k <= 12; ++k) {
        CHECK(sched.alpha(k) == k * (k + 1) / 2);
    }
    CHECK(check_finite_schedule(sched.alphas, fam, 0.25, make_budget_simple(1.0)).empty());
}

TEST_CASE("finite schedule: single element") {
    // r_1 = max{ln(1/2)/ln(1/2), 1} = 1
    FiniteFamilyData fam{{1}, {1.0}};
    const auto sched = schedule_finite(fam, 0.5, make_budget_simple(1.0), 1);
    CHECK(sched.alpha(1) == 1);
}

TEST_CASE("finite schedule: huge budget lets supports dominate") {
    FiniteFamilyData fam{{3, 5, 2}, {1.0, 1.0, 1.0}};
    const auto sched = schedule_finite(fam, 0.5, make_budget_simple(1e9), 3);
    CHECK(sched.alpha(2) - sched.alpha(1) == 5); // max{N(1), N(2)} = 5
    CHECK(sched.alpha(3) - sched.alpha(2) == 5); // max{N(2), N(3)} = 5
    CHECK(sched.binding[1] == "support_curr");
}

TEST_CASE("finite schedule: zero vectors fall back to support constraints") {
    FiniteFamilyData fam{{2, 2, 2}, {1.0, 0.0, 1.0}};
    const auto sched = schedule_finite(fam, 0.5, make_budget_simple(1.0), 3);
    CHECK(check_finite_schedule(sched.alphas, fam, 0.5, make_budget_simple(1.0)).empty());
    CHECK(sched.alpha(2) - sched.alpha(1) == 2);
}

TEST_CASE("finite schedule rejects a non-contracting S") {
    FiniteFamilyData fam{{1}, {1.0}};
    CHECK_THROWS_AS(schedule_finite(fam, 1.0, make_budget_simple(1.0), 1), PreconditionError);
    CHECK_THROWS_AS(schedule_finite(fam, 1.5, make_budget_simple(1.0), 1), PreconditionError);
}

TEST_CASE("localized schedule: frozen regression fixture") {
    // lambda = e, beta = 2, B = C = 1, X_d = l2, eps = 1 variant (i)
    const auto norms = localized_fixture_norms(8);
    const auto sched = schedule_localized(localized_fixture_params(), norms,
                                          make_budget_simple(1.0), 8);
    const std::vector<std::int64_t> expected{0, 3, 8, 16, 27, 40, 56, 75};
    CHECK(sched.alphas == expected);
    CHECK(check_localized_schedule(sched.alphas, localized_fixture_params(), norms,
                                   make_budget_simple(1.0)).empty());

    // k = 2 has no index-growth contribution (k - 2 = 0); the binding
    // constraint is the decay/growth pair
    CHECK(sched.binding[1] != "index_growth");
}

TEST_CASE("localized schedule: the zeroth growth term is a config switch") {
    auto params = localized_fixture_params();
    params.include_zeroth_term = false;
    const auto norms = localized_fixture_norms(8);
    const auto sched = schedule_localized(params, norms, make_budget_simple(1.0), 8);
    // for this fixture the n = 0 summand is dominated; the schedule agrees
    const std::vector<std::int64_t> expected{0, 3, 8, 16, 27, 40, 56, 75};
    CHECK(sched.alphas == expected);
    CHECK(check_localized_schedule(sched.alphas, params, norms, make_budget_simple(1.0)).empty());
}

TEST_CASE("localized schedule: doubling the budget never increases powers") {
    const auto norms = localized_fixture_norms(8);
    const auto tight = schedule_localized(localized_fixture_params(), norms,
                                          make_budget_simple(1.0), 8);
    const auto loose = schedule_localized(localized_fixture_params(), norms,
                                          make_budget_simple(2.0), 8);
    for (std::int64_t k = 1; k <= 8; ++k) {
        CHECK(loose.alpha(k) <= tight.alpha(k));
    }
}

TEST_CASE("localized schedule rejects slow decay") {
    auto params = localized_fixture_params();
    params.beta = 0.9; // ln(lambda) = 1 > beta
    CHECK_THROWS_AS(schedule_localized(params, {1.0, 1.0}, make_budget_simple(1.0), 2),
                    PreconditionError);
}

TEST_CASE("function schedule: frozen regression fixture") {
    // lambda ||T_-1|| = 2, mu = 4, C_n = 1, ||f_k|| = 1, ||S|| = 1/2, a_k = k
    const std::vector<double> norms(6, 1.0);
    const std::vector<std::int64_t> a_ks{1, 2, 3, 4, 5, 6};
    const std::vector<double> C_ks(6, 1.0);
    const auto sched = schedule_function(function_fixture_params(), norms, a_ks, C_ks,
                                         make_budget_simple(1.0), 6);
    const std::vector<std::int64_t> expected{0, 4, 9, 15, 22, 30};
    CHECK(sched.alphas == expected);
    CHECK(check_function_schedule(sched.alphas, function_fixture_params(), norms, a_ks, C_ks,
                                  make_budget_simple(1.0)).empty());
}

TEST_CASE("function schedule: slack constraints leave the strict-increase floor") {
    const std::vector<double> norms(2, 1.0);
    const std::vector<std::int64_t> a_ks{0, 0};
    const std::vector<double> C_ks(2, 1.0);
    const auto sched = schedule_function(function_fixture_params(), norms, a_ks, C_ks,
                                         make_budget_simple(1e9), 2);
    CHECK(sched.alpha(1) == 0);
    CHECK(sched.alpha(2) == 1);
    CHECK(sched.binding[1] == "strict_increase");
}

TEST_CASE("function schedule: certificate increments are replayed") {
    // a_k = a0 + k*a as produced by the half-Gabor certificates
    std::vector<std::int64_t> a_ks;
    std::vector<double> norms, C_ks;
    for (std::int64_t k = 1; k <= 7; ++k) {
        a_ks.push_back(1 + 2 * k);
        norms.push_back(1.0);
        C_ks.push_back(std::pow(4.0, static_cast<double>(k)));
    }
    const auto sched = schedule_function(function_fixture_params(), norms, a_ks, C_ks,
                                         make_budget_simple(1.0), 7);
    for (std::int64_t k = 1; k < 7; ++k) {
        CHECK(sched.alpha(k + 1) - sched.alpha(k) >= a_ks[static_cast<std::size_t>(k - 1)]);
    }
    CHECK(check_function_schedule(sched.alphas, function_fixture_params(), norms, a_ks, C_ks,
                                  make_budget_simple(1.0)).empty());
}

TEST_CASE("function schedule rejects mu below the growth threshold") {
    auto params = function_fixture_params();
    params.mu = 2.0; // equals lambda * ||T_-1||
    CHECK_THROWS_AS(schedule_function(params, {1.0}, {1}, {1.0}, make_budget_simple(1.0), 1),
                    PreconditionError);
}

TEST_CASE("minimality: decrementing any power breaks a defining inequality") {
    // finite fixture
    FiniteFamilyData fam;
    for (std::int64_t k = 1; k <= 12; ++k) {
        fam.supports.push_back(k);
        fam.norms.push_back(1.0);
    }
    const auto budget = make_budget_simple(1.0);
    const auto fin = schedule_finite(fam, 0.25, budget, 12);
    for (std::size_t i = 0; i < fin.alphas.size(); ++i) {
        auto probe = fin.alphas;
        probe[i] -= 1;
        CHECK(!check_finite_schedule(probe, fam, 0.25, budget).empty());
    }

    // localized fixture
    const auto norms = localized_fixture_norms(8);
    const auto loc = schedule_localized(localized_fixture_params(), norms, budget, 8);
    for (std::size_t i = 0; i < loc.alphas.size(); ++i) {
        auto probe = loc.alphas;
        probe[i] -= 1;
        CHECK(!check_localized_schedule(probe, localized_fixture_params(), norms, budget).empty());
    }

    // function fixture
    const std::vector<double> fnorms(6, 1.0);
    const std::vector<std::int64_t> a_ks{1, 2, 3, 4, 5, 6};
    const std::vector<double> C_ks(6, 1.0);
    const auto fun = schedule_function(function_fixture_params(), fnorms, a_ks, C_ks, budget, 6);
    for (std::size_t i = 0; i < fun.alphas.size(); ++i) {
        auto probe = fun.alphas;
        probe[i] -= 1;
        CHECK(!check_function_schedule(probe, function_fixture_params(), fnorms, a_ks, C_ks,
                                       budget).empty());
    }
}
