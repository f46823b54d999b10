#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hhbounds/bounds.hpp"

using namespace hh;

namespace {

const TestFunction kSquare = power_function(2);
const Interval kUnit{0.0, 1.0};
const Interval kOneTwo{1.0, 2.0};

}  // namespace

TEST(Deviation, SquareOnUnitInterval) {
    const auto d = deviation(kSquare, kUnit, 1.0, 1.0);
    EXPECT_NEAR(d.weighted_endpoint_value, 0.5, 1e-15);
    EXPECT_NEAR(d.integral_mean, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(d.lhs_abs, 1.0 / 6.0, 1e-12);
    EXPECT_FALSE(d.budget_exhausted);
}

TEST(Deviation, WeightedSquare) {
    const auto d = deviation(kSquare, kOneTwo, 2.0, 1.0);
    EXPECT_NEAR(d.weighted_endpoint_value, 2.0, 1e-15);
    EXPECT_NEAR(d.lhs_abs, 1.0 / 3.0, 1e-12);
}

TEST(Deviation, LinearVanishesForEqualWeights) {
    EXPECT_LE(deviation(linear_function(2.0, 1.0), {0.5, 3.0}, 1.0, 1.0).lhs_abs, 1e-12);
}

TEST(KernelIdentity, Square) {
    const auto c = kernel_identity(kSquare, kUnit, 1.0, 1.0);
    EXPECT_NEAR(c.lhs, 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(c.rhs, 1.0 / 6.0, 1e-12);
}

TEST(KernelIdentity, ResidualsAcrossCorpus) {
    const Interval ivs[] = {{1.0, 2.0}, {0.5, 3.0}, {2.0, 5.0}};
    const double ws[] = {0.0, 0.5, 1.0, 2.0, 5.0};
    for (const auto& fn : builtin_corpus())
        for (const auto& iv : ivs)
            for (double l : ws)
                for (double u : ws) {
                    if (l + u == 0.0)
                        continue;
                    EXPECT_LE(kernel_identity_residual(fn, iv, l, u, 1e-11), 1e-9)
                        << fn.id << " [" << iv.a << "," << iv.b << "] l=" << l << " u=" << u;
                }
}

TEST(KernelIdentity, ConstantFunction) {
    const auto c = kernel_identity(constant_function(), {0.5, 3.0}, 2.0, 1.0);
    EXPECT_LE(std::abs(c.lhs), 1e-14);
    EXPECT_LE(std::abs(c.rhs), 1e-14);
}

TEST(BoundHH, Bracket) {
    auto [lo, hi] = bound_hh(kSquare, kUnit);
    EXPECT_DOUBLE_EQ(lo, 0.25);
    EXPECT_DOUBLE_EQ(hi, 0.5);
    auto [lo2, hi2] = bound_hh(kSquare, kOneTwo);
    EXPECT_DOUBLE_EQ(lo2, 2.25);
    EXPECT_DOUBLE_EQ(hi2, 2.5);
    EXPECT_LE(lo2, 7.0 / 3.0);
    EXPECT_GE(hi2, 7.0 / 3.0);
}

TEST(BoundDA, Values) {
    const auto r = bound_da(kSquare, kUnit);
    EXPECT_NEAR(r.rhs, 0.25, 1e-15);
    EXPECT_NEAR(r.lhs, 1.0 / 6.0, 1e-12);
    EXPECT_TRUE(r.holds);
    const auto r2 = bound_da(kSquare, kOneTwo);
    EXPECT_NEAR(r2.rhs, 0.75, 1e-15);
    EXPECT_NEAR(r2.lhs, 1.0 / 6.0, 1e-12);
}

TEST(BoundSSO, Values) {
    const auto r = bound_sso(kSquare, kUnit, 1.0, 1.0);
    EXPECT_NEAR(r.rhs, 0.5, 1e-15);
    EXPECT_NEAR(r.lhs, 1.0 / 3.0, 1e-12);
    const auto r2 = bound_sso(kSquare, kOneTwo, 1.0, 1.0);
    EXPECT_NEAR(r2.rhs, 2.5, 1e-15);
    EXPECT_NEAR(r2.lhs, 7.0 / 3.0, 1e-12);
    EXPECT_TRUE(r2.holds);
}

TEST(BoundBopM, LooseAndTight) {
    const auto r = bound_bop_m(kSquare, kOneTwo, 1.0, 2.0);
    const double loose = 0.25 * (std::sqrt(6.5) + std::sqrt(12.5));
    EXPECT_NEAR(r.rhs_loose, loose, 1e-14);
    EXPECT_NEAR(r.rhs_loose, 1.5212, 1e-4);
    EXPECT_NEAR(r.rhs, loose / std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(r.rhs, 0.8784, 1e-4);
    EXPECT_NEAR(r.lhs, 1.0 / 6.0, 1e-12);
    EXPECT_THROW(bound_bop_m(kSquare, kOneTwo, 1.0, 1.0), ParamError);
}

TEST(BoundBopM, TightNeverExceedsLoose) {
    for (double q : {1.5, 2.0, 3.0, 10.0})
        for (double m : {0.5, 1.0}) {
            const auto r = bound_bop_m(power_function(3), {0.5, 3.0}, m, q);
            EXPECT_LE(r.rhs, r.rhs_loose);
        }
}

TEST(BoundBopAM, Value) {
    const auto r = bound_bop_am(kSquare, kOneTwo, 1.0, 1.0, 1.0);
    EXPECT_NEAR(r.rhs, 0.75, 1e-15);
}

TEST(BoundThm11, WorkedValue) {
    const auto r = bound_thm11(kSquare, kOneTwo, {1.0, 1.0, 2.0, 1.0, 1.0});
    EXPECT_NEAR(r.rhs, 61.0 / 81.0, 1e-12);
    EXPECT_NEAR(r.branch1, r.branch2, 1e-14);
    EXPECT_NEAR(r.lhs, 1.0 / 3.0, 1e-12);
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.slack, 61.0 / 81.0 - 1.0 / 3.0, 1e-12);
}

TEST(BoundThm11, ReducesToBopAMAndDA) {
    for (double alpha : {0.5, 1.0})
        for (double m : {0.5, 1.0})
            for (double q : {1.0, 2.0, 3.0}) {
                const auto a = bound_thm11(power_function(3), {0.5, 3.0}, {alpha, m, 1.0, 1.0, q});
                const auto b = bound_bop_am(power_function(3), {0.5, 3.0}, alpha, m, q);
                EXPECT_TRUE(nearly_equal(a.rhs, b.rhs)) << a.rhs << " vs " << b.rhs;
            }
    const auto t = bound_thm11(kSquare, kOneTwo, {1.0, 1.0, 1.0, 1.0, 1.0});
    EXPECT_TRUE(nearly_equal(t.rhs, bound_da(kSquare, kOneTwo).rhs));
}

TEST(BoundThm11, ConvexFormAgrees) {
    for (double l : {0.0, 0.5, 2.0})
        for (double u : {0.5, 1.0, 5.0})
            for (double q : {1.0, 2.0}) {
                const double general = bound_thm11(power_function(4), {0.5, 3.0}, {1.0, 1.0, l, u, q}).rhs;
                EXPECT_TRUE(nearly_equal(general, thm11_convex_form(power_function(4), {0.5, 3.0}, l, u, q)));
            }
}

TEST(BoundThm211, WorkedValues) {
    const auto r = bound_thm211(kSquare, kOneTwo, {1.0, 1.0, 1.0, 1.0, 2.0});
    EXPECT_NEAR(r.rhs, 0.25 / std::sqrt(3.0) * (std::sqrt(6.5) + std::sqrt(12.5)), 1e-14);
    EXPECT_TRUE(nearly_equal(r.rhs, bound_bop_m(kSquare, kOneTwo, 1.0, 2.0).rhs));

    const auto r2 = bound_thm211(kSquare, kOneTwo, {1.0, 1.0, 2.0, 1.0, 2.0});
    const double expect = (1.0 / 9.0) / std::sqrt(3.0) * (4.0 * std::sqrt(68.0 / 9.0) + std::sqrt(122.0 / 9.0));
    EXPECT_NEAR(r2.rhs, expect, 1e-14);
    EXPECT_NEAR(r2.rhs, 0.9415, 1e-4);
    EXPECT_THROW(bound_thm211(kSquare, kOneTwo, {1.0, 1.0, 1.0, 1.0, 1.0}), ParamError);
}

TEST(BoundThm211, EqualWeightsReduceToBopM) {
    for (double m : {0.5, 1.0})
        for (double q : {1.5, 2.0, 3.0}) {
            const auto a = bound_thm211(power_function(3), {0.5, 3.0}, {1.0, m, 1.0, 1.0, q});
            const auto b = bound_bop_m(power_function(3), {0.5, 3.0}, m, q);
            EXPECT_TRUE(nearly_equal(a.rhs, b.rhs)) << a.rhs << " vs " << b.rhs;
        }
}

TEST(BoundThm211, ConvexFormAgrees) {
    for (double l : {0.0, 0.5, 2.0})
        for (double u : {0.5, 1.0, 5.0}) {
            const double general = bound_thm211(power_function(4), {0.5, 3.0}, {1.0, 1.0, l, u, 3.0}).rhs;
            EXPECT_TRUE(nearly_equal(general, thm211_convex_form(power_function(4), {0.5, 3.0}, l, u, 3.0)));
        }
}

// The Hoelder factor at lambda = mu = 1, p = 2 is the integral of |2t - 1|^2,
// which is 1/3, so the bound is (1/2)(1/3)^{1/2}(1/2)^{1/2} sqrt(20) = sqrt(5/6).
TEST(BoundThm22, WorkedValue) {
    const auto r = bound_thm22(kSquare, kOneTwo, {1.0, 1.0, 1.0, 1.0, 2.0});
    const double hoelder = kernel_moment(1.0, 1.0, 1.0, KernelWeight::one, KernelSwitch::lambda, 2.0, 1e-13);
    EXPECT_NEAR(hoelder, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.rhs, 0.5 * std::sqrt(hoelder) * std::sqrt(0.5) * std::sqrt(20.0), 1e-12);
    EXPECT_NEAR(r.rhs, std::sqrt(5.0 / 6.0), 1e-14);
    EXPECT_THROW(bound_thm22(kSquare, kOneTwo, {1.0, 1.0, 1.0, 1.0, 1.0}), ParamError);
}

TEST(BoundThm22, SpecialisedFormsAgree) {
    for (double alpha : {0.5, 1.0})
        for (double m : {0.5, 1.0})
            for (double q : {1.5, 2.0, 3.0}) {
                const double general = bound_thm22(power_function(3), {0.5, 3.0}, {alpha, m, 1.0, 1.0, q}).rhs;
                EXPECT_TRUE(nearly_equal(general, thm22_equal_weight_form(power_function(3), {0.5, 3.0}, alpha, m, q)));
            }
    for (double l : {0.0, 0.5, 2.0})
        for (double u : {0.5, 1.0, 5.0}) {
            const double general = bound_thm22(power_function(4), {0.5, 3.0}, {1.0, 1.0, l, u, 2.5}).rhs;
            EXPECT_TRUE(nearly_equal(general, thm22_convex_form(power_function(4), {0.5, 3.0}, l, u, 2.5)));
        }
}

// With m = 1, reflecting f about the midpoint swaps the roles of lambda and mu.
TEST(Bounds, SwapSymmetry) {
    const auto corpus = builtin_corpus();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> w(0.0, 5.0);
    std::uniform_real_distribution<double> al(0.1, 1.0);
    const Interval iv{0.5, 3.0};
    const Theorem ts[] = {Theorem::thm11, Theorem::thm211, Theorem::thm22};
    for (int i = 0; i < 30; ++i) {
        const TestFunction fn = corpus[rng() % corpus.size()];
        const TestFunction rf = reflect(fn, iv);
        const double l = w(rng);
        const double u = w(rng) + 0.01;
        const double alpha = al(rng);
        for (Theorem t : ts) {
            const Params p{alpha, 1.0, l, u, 2.0};
            const Params ps{alpha, 1.0, u, l, 2.0};
            const auto a = evaluate_bound(t, fn, iv, p);
            const auto b = evaluate_bound(t, rf, iv, ps);
            EXPECT_NEAR(a.lhs, b.lhs, 1e-9 * std::max(1.0, a.lhs));
            EXPECT_TRUE(nearly_equal(a.rhs, b.rhs, 1e-12)) << to_string(t) << " " << a.rhs << " vs " << b.rhs;
        }
    }
}

TEST(Verify, WorkedExampleHolds) {
    const auto r = verify(kSquare, kOneTwo, {1.0, 1.0, 2.0, 1.0, 1.0}, Theorem::thm11);
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.slack, 61.0 / 81.0 - 1.0 / 3.0, 1e-12);
}

TEST(Verify, GateFailureIsDistinctFromViolation) {
    try {
        verify(exp_function(), {1.0, 2.0}, {1.0, 0.5, 1.0, 1.0, 1.0}, Theorem::thm11);
        FAIL() << "expected GateError";
    } catch (const GateError& e) {
        EXPECT_EQ(e.theorem, Theorem::thm11);
        EXPECT_FALSE(e.verdict.holds);
        EXPECT_GT(e.verdict.worst_violation, kViolationTolerance);
        EXPECT_TRUE(std::isfinite(e.verdict.witness.x));
    }
}

TEST(Verify, QOneRejectedForHoelderBounds) {
    for (Theorem t : {Theorem::bop_m, Theorem::thm211, Theorem::thm22})
        EXPECT_THROW(verify(kSquare, kOneTwo, {1.0, 1.0, 1.0, 1.0, 1.0}, t), ParamError);
}

TEST(Verify, ConstantFunctionHasZeroDeviation) {
    for (Theorem t : kAllTheorems) {
        const auto r = verify(constant_function(), kOneTwo, {1.0, 1.0, 2.0, 1.0, 2.0}, t);
        EXPECT_TRUE(r.holds) << to_string(t);
        if (t != Theorem::sso) {
            EXPECT_LE(r.lhs, 1e-14);
        }
    }
}

TEST(Verify, GatedBoundsHold) {
    const auto corpus = builtin_corpus();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> w(0.0, 5.0);
    const Interval ivs[] = {{1.0, 2.0}, {0.5, 3.0}, {2.0, 5.0}};
    int gated = 0;
    for (int i = 0; i < 60; ++i) {
        const TestFunction fn = corpus[rng() % corpus.size()];
        const auto& iv = ivs[rng() % 3];
        const Params p{(rng() % 2) ? 1.0 : 0.5, (rng() % 2) ? 1.0 : 0.5, w(rng), w(rng) + 0.01,
                       static_cast<double>(1 + rng() % 3)};
        for (Theorem t : kAllTheorems) {
            if (requires_q_above_one(t) && p.q == 1.0)
                continue;
            try {
                const auto r = verify(fn, iv, p, t);
                EXPECT_TRUE(r.holds) << fn.id << " " << to_string(t);
                ++gated;
            } catch (const GateError&) {
            }
        }
    }
    EXPECT_GT(gated, 0);
}

TEST(Theorems, ParseRoundTrip) {
    for (Theorem t : kAllTheorems)
        EXPECT_EQ(parse_theorem(to_string(t)), t);
    EXPECT_THROW(parse_theorem("thm99"), ParamError);
}
