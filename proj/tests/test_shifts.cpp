#include <doctest.h>

#include <cmath>
#include <random>

#include "suborbit/errors.hpp"
#include "suborbit/shifts.hpp"

using namespace suborbit;

namespace {

SeqVector random_sparse(std::mt19937_64& rng, int max_dim = 24) {
    std::uniform_int_distribution<int> idx(1, max_dim);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    SeqVector v;
    const int nnz = 1 + idx(rng) % 8;
    for (int t = 0; t < nnz; ++t) v.set(idx(rng), val(rng));
    return v;
}

/// Brute-force operator-norm estimate: max of ||op(v)||/||v|| over random
/// unit-normalized vectors plus every basis vector up to max_dim.
template <typename Op>
double brute_force_norm(const WeightedLpSpace& space, Op&& op, int max_dim, int trials,
                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, max_dim);
    double best = 0.0;
    auto probe = [&](const SeqVector& v) {
        const double nv = norm(space, v);
        if (nv > 0.0) best = std::max(best, norm(space, op(v)) / nv);
    };
    for (int k = 1; k <= max_dim; ++k) probe(SeqVector::unit(k, 1.0));
    for (int t = 0; t < trials; ++t) {
        SeqVector v;
        const int d = dim(rng);
        for (int k = 1; k <= d; ++k) {
            const double c = val(rng);
            if (c != 0.0) v.set(k, c);
        }
        probe(v);
    }
    return best;
}

} // namespace

TEST_CASE("shift norms from the ratio-supremum formulas") {
    WeightedLpSpace s(1.0, WeightSequence::geometric(2.0), BasisMode::Canonical);
    const auto n = shift_norms(s);
    CHECK(n.left == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(n.right == doctest::Approx(2.0).epsilon(1e-15));

    WeightedLpSpace scaled(3.0, WeightSequence::power(4.0), BasisMode::Scaled);
    const auto ns = shift_norms(scaled);
    CHECK(ns.left == 1.0);
    CHECK(ns.right == 1.0);

    // w_k = k, p = 2: ||L|| = 1 (monotone limit), ||R|| = sqrt(2) (attained at k = 2)
    WeightedLpSpace lin(2.0, WeightSequence::power(1.0), BasisMode::Canonical);
    const auto nl = shift_norms(lin);
    CHECK(nl.left == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nl.right == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("brute-force operator norms never exceed the formulas") {
    WeightedLpSpace s(1.0, WeightSequence::geometric(2.0), BasisMode::Canonical);
    const auto formula = shift_norms(s);
    const double bl = brute_force_norm(s, [](const SeqVector& v) { return left_shift_pow(v, 1); },
                                       50, 400, 123);
    const double br = brute_force_norm(s, [](const SeqVector& v) { return right_shift_pow(v, 1); },
                                       50, 400, 321);
    CHECK(bl <= formula.left * (1.0 + 1e-12));
    CHECK(br <= formula.right * (1.0 + 1e-12));
    CHECK(formula.left - bl <= 1e-3);  // basis vectors attain the ratio here
    CHECK(formula.right - br <= 1e-3);

    WeightedLpSpace lin(2.0, WeightSequence::power(1.0), BasisMode::Canonical);
    const auto nf = shift_norms(lin);
    const double bl2 = brute_force_norm(lin, [](const SeqVector& v) { return left_shift_pow(v, 1); },
                                        50, 400, 55);
    const double br2 = brute_force_norm(lin, [](const SeqVector& v) { return right_shift_pow(v, 1); },
                                        50, 400, 56);
    CHECK(bl2 <= nf.left * (1.0 + 1e-12));
    CHECK(br2 <= nf.right * (1.0 + 1e-12));
    CHECK(nf.left - bl2 <= 0.02);  // sup is a limit, approached as dim grows
    CHECK(nf.right - br2 <= 1e-9); // attained at delta_2
}

TEST_CASE("unbounded weights are reported with the failing operator") {
    WeightedLpSpace up(1.0, WeightSequence::power(5000.0), BasisMode::Canonical);
    CHECK_THROWS_AS(shift_norms(up), UnboundedOperatorError);
    try {
        shift_norms(up);
    } catch (const UnboundedOperatorError& e) {
        CHECK(e.operator_name == "R");
    }
    WeightedLpSpace down(1.0, WeightSequence::power(-5000.0), BasisMode::Canonical);
    try {
        shift_norms(down);
    } catch (const UnboundedOperatorError& e) {
        CHECK(e.operator_name == "L");
    }
}

TEST_CASE("plain shift powers") {
    const auto e3 = SeqVector::unit(3, 1.0);
    CHECK(left_shift_pow(e3, 2) == SeqVector::unit(1, 1.0));
    CHECK(left_shift_pow(e3, 3).empty());

    SeqVector v;
    v.set(2, 1.0);
    v.set(5, 1.0);
    SeqVector expect;
    expect.set(1, 1.0);
    expect.set(4, 1.0);
    CHECK(left_shift_pow(v, 1) == expect);

    CHECK(right_shift_pow(SeqVector::unit(1, 1.0), 4) == SeqVector::unit(5, 1.0));
    CHECK(right_shift_pow(v, 0) == v);
}

TEST_CASE("left shift inverts right shift on sparse vectors") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        const auto v = random_sparse(rng);
        const std::int64_t n = t % 9;
        CHECK(left_shift_pow(right_shift_pow(v, n), n) == v);
    }
}

TEST_CASE("weighted shift pair with integer lambda exponents") {
    WeightedLpSpace s(2.0, WeightSequence::constant(1.0), BasisMode::Canonical);
    ShiftOperators ops(s, 4.0);
    CHECK(ops.norm_contraction() == doctest::Approx(0.25).epsilon(1e-15));

    const auto e3 = SeqVector::unit(3, 1.0);
    CHECK(t_pow(ops, e3, 2).materialize() == SeqVector::unit(1, 16.0));
    CHECK(t_pow(ops, e3, 3).materialize().empty());
    CHECK(s_pow(ops, SeqVector::unit(1, 1.0), 1).materialize()
          == SeqVector::unit(2, 0.25));
    CHECK(s_pow(ops, e3, 0).materialize() == e3);

    // exact exponent cancellation: T^3 S^3 on 4^{-3} e_4 gives coefficient 1
    const auto down = s_pow(ops, SeqVector::unit(4, std::pow(4.0, -3.0)), 3);
    const auto back = t_pow(ops, down, 3);
    CHECK(back.exponent == 0);
    CHECK(back.materialize() == SeqVector::unit(4, std::pow(4.0, -3.0)));
}

TEST_CASE("T S round trip is the identity as sparse maps") {
    WeightedLpSpace s(1.0, WeightSequence::constant(1.0), BasisMode::Canonical);
    ShiftOperators ops(s, 3.0);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        const auto v = random_sparse(rng);
        const std::int64_t n = t % 7;
        const auto round = t_pow(ops, s_pow(ops, v, n), n);
        CHECK(round.exponent == 0);
        CHECK(round.materialize() == v);
    }
}

TEST_CASE("power norm bounds on random vectors") {
    WeightedLpSpace s(2.0, WeightSequence::geometric(1.5), BasisMode::Canonical);
    const auto ns = shift_norms(s);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        const auto v = random_sparse(rng);
        const double nv = norm(s, v);
        const std::int64_t n = 1 + t % 5;
        CHECK(norm(s, left_shift_pow(v, n))
              <= std::pow(ns.left, static_cast<double>(n)) * nv * (1.0 + 1e-10));
        CHECK(norm(s, right_shift_pow(v, n))
              <= std::pow(ns.right, static_cast<double>(n)) * nv * (1.0 + 1e-10));
    }
}

TEST_CASE("contraction: ||S^n v|| <= ||S||^n ||v|| in scaled mode") {
    WeightedLpSpace s(2.0, WeightSequence::geometric(3.0), BasisMode::Scaled);
    ShiftOperators ops(s, 2.5); // ||R|| = 1, ||S|| = 0.4
    std::mt19937_64 rng(37);
    for (int t = 0; t < 60; ++t) {
        const auto v = random_sparse(rng);
        const std::int64_t n = 1 + t % 6;
        const auto sv = s_pow(ops, v, n).materialize();
        CHECK(norm(s, sv)
              <= std::pow(ops.norm_contraction(), static_cast<double>(n)) * norm(s, v)
                 * (1.0 + 1e-10));
    }
}

TEST_CASE("lambda must exceed the right-shift norm") {
    WeightedLpSpace s(1.0, WeightSequence::geometric(2.0), BasisMode::Canonical);
    CHECK_THROWS_AS(ShiftOperators(s, 2.0), PreconditionError);
    CHECK_THROWS_AS(ShiftOperators(s, 1.0), PreconditionError);
    const auto ops = ShiftOperators::with_default_lambda(s);
    CHECK(ops.lambda() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(ops.norm_contraction() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("p-Riesz sampling") {
    // scaled mode: every ratio is 1 regardless of the weights
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> pd(1.0, 4.0);
    std::uniform_real_distribution<double> rd(0.5, 3.0);
    for (int t = 0; t < 20; ++t) {
        WeightedLpSpace s(pd(rng), WeightSequence::geometric(rd(rng)), BasisMode::Scaled);
        const auto sample = sample_priesz_bounds(s, 50, 12, 1000 + t);
        CHECK(std::abs(sample.lower_bound_upper_estimate - 1.0) <= 1e-12);
        CHECK(std::abs(sample.upper_bound_lower_estimate - 1.0) <= 1e-12);
        // scaled mode has A = B = 1 exactly, so || L || * A <= B holds with equality
        CHECK(shift_norms(s).left * sample.lower_bound_upper_estimate
              <= sample.upper_bound_lower_estimate + 1e-12);
        CHECK(shift_norms(s).right == 1.0);
    }

    // canonical flat weights behave the same
    WeightedLpSpace flat(2.0, WeightSequence::constant(1.0), BasisMode::Canonical);
    const auto sf = sample_priesz_bounds(flat, 50, 12, 99);
    CHECK(sf.lower_bound_upper_estimate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sf.upper_bound_lower_estimate == doctest::Approx(1.0).epsilon(1e-12));

    // canonical growing weights: the sampled ratios straddle, min <= max
    WeightedLpSpace grow(1.0, WeightSequence::geometric(2.0), BasisMode::Canonical);
    const auto sg = sample_priesz_bounds(grow, 200, 10, 7);
    CHECK(sg.lower_bound_upper_estimate <= sg.upper_bound_lower_estimate);
    CHECK(sg.lower_bound_upper_estimate >= std::pow(2.0, 1.0) * (1.0 - 1e-12)); // w_k >= 2
}
