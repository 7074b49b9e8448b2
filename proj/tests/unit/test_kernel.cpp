#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "esopt/errors.hpp"
#include "esopt/kernel.hpp"

#include "../support/random_params.hpp"

using namespace esopt;

namespace {

StepParams uniform_step() { return StepParams::from_moves(1.25, 0.8, 1.3, 1.0 / 1.3, 0.25, 0.25, 0.25, 0.25); }

using Big = boost::multiprecision::cpp_bin_float_50;

// Direct 50-digit evaluation of the two-log formula, no rearrangement.
double g_direct(ClaimPair c, const StepParams& sp, double gamma_in) {
    const Big gamma = gamma_in;
    const Big e1 = exp(-gamma * Big(c.c_h)), e2 = exp(-gamma * Big(c.c_l));
    const Big p1 = sp.p1, p2 = sp.p2, p3 = sp.p3, p4 = sp.p4, q = sp.q;
    const Big up = log((p1 + p2) / (p1 * e1 + p2 * e2));
    const Big down = log((p3 + p4) / (p3 * e1 + p4 * e2));
    return static_cast<double>((q * up + (1 - q) * down) / gamma);
}

}  // namespace

TEST(PriceG, TrivialClaims) {
    const auto sp = uniform_step();
    EXPECT_EQ(price_g({0.0, 0.0}, sp, RiskAversion(1.0)), 0.0);
    for (double c : {-3.0, 0.5, 17.0}) EXPECT_DOUBLE_EQ(price_g({c, c}, sp, RiskAversion(0.7)), c);
}

TEST(PriceG, UniformExample) {
    // log(2 / (1 + e^-1)), 40-digit evaluation.
    EXPECT_NEAR(price_g({1.0, 0.0}, uniform_step(), RiskAversion(1.0)), 0.37988549304172248, 1e-15);
}

TEST(PriceG, PerfectCorrelationIsRiskNeutral) {
    const auto sp = StepParams::from_moves(1.25, 0.8, 1.3, 1.0 / 1.3, 0.6, 0.0, 0.0, 0.4);
    for (double g : {1e-6, 0.3, 5.0, 1e4}) {
        EXPECT_NEAR(price_g({2.0, -1.0}, sp, RiskAversion(g)), sp.q * 2.0 - (1.0 - sp.q), 1e-12);
    }
    // Perfect anti-correlation pairs the S-up move with Y-down.
    const auto anti = StepParams::from_moves(1.25, 0.8, 1.3, 1.0 / 1.3, 0.0, 0.6, 0.4, 0.0);
    EXPECT_NEAR(price_g({2.0, -1.0}, anti, RiskAversion(3.0)), (1.0 - anti.q) * 2.0 - anti.q, 1e-12);
}

TEST(PriceG, DegenerateBranchThrows) {
    StepParams sp = uniform_step();
    sp.p1 = sp.p2 = 0.0;
    sp.p3 = sp.p4 = 0.5;
    EXPECT_THROW(price_g({1.0, 0.0}, sp, RiskAversion(1.0)), DegenerateBranch);
    EXPECT_THROW(minimal_measure(sp), DegenerateBranch);
    EXPECT_THROW(optimal_hedge({1.0, 0.0}, sp, RiskAversion(1.0), 1.0), DegenerateBranch);
}

TEST(PriceG, RiskAversionMustBePositive) {
    EXPECT_THROW(RiskAversion(0.0), std::invalid_argument);
    EXPECT_THROW(RiskAversion(-1.0), std::invalid_argument);
}

TEST(PriceG, MatchesDirectFormulaAcrossSmallGammaSwitch) {
    std::mt19937_64 rng(5);
    for (int s = 0; s < 50; ++s) {
        const auto draw = esopt::testing::draw_feasible(rng, 10);
        const ClaimPair c{0.8, 0.1};
        for (double g : {1e-3, 1e-6, 1.2e-8, 0.9e-8, 1e-9}) {
            EXPECT_NEAR(price_g(c, draw.sp, RiskAversion(g)), g_direct(c, draw.sp, g), 1e-14);
        }
        for (double g : {1e-2, 0.5, 3.0, 40.0}) {
            EXPECT_NEAR(price_g(c, draw.sp, RiskAversion(g)), g_direct(c, draw.sp, g), 1e-14);
        }
    }
}

TEST(PriceG, Properties) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> pay(0.0, 3.0);
    for (int s = 0; s < 200; ++s) {
        const auto draw = esopt::testing::draw_feasible(rng, 1 + static_cast<int>(rng() % 100));
        const auto& sp = draw.sp;
        const ClaimPair c{pay(rng), pay(rng)};
        const double lo = std::min(c.c_h, c.c_l), hi = std::max(c.c_h, c.c_l);

        double prev = 1e300;
        for (double g : {1e-3, 0.01, 0.125, 0.25, 0.5, 1.0, 2.0, 8.0, 64.0}) {
            const double v = price_g(c, sp, RiskAversion(g));
            EXPECT_GE(v, lo - 1e-14);
            EXPECT_LE(v, hi + 1e-14);
            EXPECT_LE(v, prev + 1e-14);  // non-increasing in gamma
            prev = v;
        }

        const double g = 0.4;
        double per_unit_prev = price_g(c, sp, RiskAversion(g));
        for (double a : {2.0, 5.0, 10.0}) {
            const double scaled = price_g({a * c.c_h, a * c.c_l}, sp, RiskAversion(g));
            EXPECT_NEAR(scaled, a * price_g(c, sp, RiskAversion(a * g)), 1e-10 * std::abs(scaled));
            EXPECT_LE(scaled / a, per_unit_prev + 1e-14);
            per_unit_prev = scaled / a;
        }
    }
}

TEST(PriceG, RiskAversionLimits) {
    std::mt19937_64 rng(10);
    for (int s = 0; s < 100; ++s) {
        const auto draw = esopt::testing::draw_feasible(rng, 1 + static_cast<int>(rng() % 100));
        const ClaimPair c{1.0, 0.0};
        EXPECT_NEAR(price_g(c, draw.sp, RiskAversion(1e3)), c.c_l, 1e-2);
        EXPECT_NEAR(price_g(c, draw.sp, RiskAversion(1e-4)), minimal_measure_price(c, draw.sp), 1e-3);
    }
}

TEST(MinimalMeasure, Cases) {
    const auto m = minimal_measure(uniform_step());
    // uniform_step has q = 4/9, so only the symmetric-q variant gives all quarters.
    StepParams sym = uniform_step();
    sym.q = 0.5;
    for (double x : minimal_measure(sym)) EXPECT_DOUBLE_EQ(x, 0.25);
    EXPECT_NEAR(m[0] + m[1] + m[2] + m[3], 1.0, 1e-15);

    StepParams edge = StepParams::from_moves(1.25, 0.8, 1.3, 1.0 / 1.3, 0.1, 0.3, 0.2, 0.4);
    edge.q = 1.0;
    const auto e = minimal_measure(edge);
    EXPECT_DOUBLE_EQ(e[0], 0.25);
    EXPECT_DOUBLE_EQ(e[1], 0.75);
    EXPECT_EQ(e[2], 0.0);
    EXPECT_EQ(e[3], 0.0);
}

TEST(Hedge, MertonRatio) {
    // ln(1.25) / 0.45
    EXPECT_NEAR(optimal_hedge({0.0, 0.0}, uniform_step(), RiskAversion(1.0), 1.0), 0.49587455847602168, 1e-15);
    EXPECT_DOUBLE_EQ(merton_hedge(uniform_step(), RiskAversion(1.0), 1.0),
                     optimal_hedge({}, uniform_step(), RiskAversion(1.0), 1.0));
}

TEST(Hedge, ConstantShiftAndExcess) {
    const auto sp = StepParams::from_moves(1.25, 0.8, 1.3, 1.0 / 1.3, 0.4, 0.1, 0.2, 0.3);
    const RiskAversion g(1.0);
    EXPECT_NEAR(optimal_hedge({1.5, 0.2}, sp, g, 2.0), optimal_hedge({4.5, 3.2}, sp, g, 2.0), 1e-12);
    EXPECT_EQ(excess_hedge({0.0, 0.0}, sp, g, 1.0), 0.0);
    EXPECT_NEAR(excess_hedge({2.0, 2.0}, sp, g, 1.0), 0.0, 1e-14);
    // -(1/0.45) log((0.2/e + 0.3) / (0.4/e + 0.1)), 40-digit evaluation.
    EXPECT_NEAR(excess_hedge({1.0, 0.0}, sp, g, 1.0), -0.91804119498215005, 1e-14);
}

TEST(Hedge, ExcessHedgeReplicatesInCompleteMarket) {
    const double s0 = 1.3;
    const auto sp = StepParams::from_moves(1.2, 1.0 / 1.2, 1.1, 1.0 / 1.1, 0.55, 0.0, 0.0, 0.45);
    for (double g : {0.1, 1.0, 7.0}) {
        const ClaimPair c{0.9, 0.2};
        const double x = excess_hedge(c, sp, RiskAversion(g), s0);
        // States with mass: (u, h) and (d, l).
        const double up = x * (sp.u - 1.0) * s0 + c.c_h;
        const double down = x * (sp.d - 1.0) * s0 + c.c_l;
        EXPECT_NEAR(up, down, 1e-10);
    }
}

TEST(Threshold, UniformExample) {
    const auto sp = uniform_step();
    const double y = exercise_threshold(1, 2.0, sp, RiskAversion(1.0));
    // Bisection on the defining equation at 40 digits.
    EXPECT_NEAR(y, 2.4157757473126263, 2e-10 * 2.0);

    // Dense scan: first sign change of exercise minus continuation on (K, 3K].
    auto gap = [&](double v) {
        return std::max(v - 2.0, 0.0) -
               price_g({std::max(sp.h * v - 2.0, 0.0), std::max(sp.ell * v - 2.0, 0.0)}, sp, RiskAversion(1.0));
    };
    const int points = 100000;
    const double step = 4.0 / points;
    double crossing = -1.0;
    for (int j = 1; j <= points; ++j) {
        const double v = 2.0 + j * step;
        if (gap(v) >= 0.0) {
            crossing = v;
            break;
        }
    }
    ASSERT_GT(crossing, 0.0);
    EXPECT_LE(y, crossing);
    EXPECT_GT(y, crossing - step);
}

TEST(Threshold, CompleteMarketIsVolumeFree) {
    // q h + (1 - q) l < 1 so early exercise can pay.
    const auto sp = StepParams::from_moves(1.25, 0.8, 1.1, 1.0 / 1.1, 0.5, 0.0, 0.0, 0.5);
    const double y1 = exercise_threshold(1, 2.0, sp, RiskAversion(1.0));
    for (int a : {2, 7, 20}) EXPECT_NEAR(exercise_threshold(a, 2.0, sp, RiskAversion(1.0)), y1, 1e-9);
    // Closed form on (K, K/l): Y - K = q (hY - K), so Y = K (1 - q) / (1 - q h).
    EXPECT_NEAR(y1, 2.0 * (1.0 - sp.q) / (1.0 - sp.q * sp.h), 1e-9);
}

TEST(Threshold, LargerPackagesExerciseEarlier) {
    std::mt19937_64 rng(33);
    int checked = 0;
    while (checked < 20) {
        const auto draw = esopt::testing::draw_feasible(rng, 1);
        if (draw.cp.rho == 0.0) continue;
        try {
            EXPECT_LE(exercise_threshold(10, 2.0, draw.sp, RiskAversion(1.0)),
                      exercise_threshold(1, 2.0, draw.sp, RiskAversion(1.0)) + 1e-9);
            ++checked;
        } catch (const NoThreshold&) {
        }
    }
}

TEST(Threshold, NoThresholdWhenHoldingAlwaysWins) {
    // Complete market where Y drifts up under the pricing weight: q h + (1 - q) l > 1.
    const auto sp = StepParams::from_moves(1.25, 0.8, 1.3, 1.0 / 1.3, 0.5, 0.0, 0.0, 0.5);
    ASSERT_GT(sp.q * sp.h + (1 - sp.q) * sp.ell, 1.0);
    EXPECT_THROW(exercise_threshold(1, 2.0, sp, RiskAversion(1.0)), NoThreshold);
    EXPECT_THROW(exercise_threshold(0, 2.0, sp, RiskAversion(1.0)), std::invalid_argument);
}

TEST(PartialExercise, OutOfTheMoneyAndEmpty) {
    const auto sp = uniform_step();
    const RiskAversion g(0.5);
    const auto r = one_period_partial_exercise(5, 1.5, 2.0, sp, g);
    EXPECT_EQ(r.a_star, 0);
    EXPECT_DOUBLE_EQ(r.value, price_g({5 * std::max(1.3 * 1.5 - 2.0, 0.0), 0.0}, sp, g));

    const auto empty = one_period_partial_exercise(0, 3.0, 2.0, sp, g);
    EXPECT_EQ(empty.a_star, 0);
    EXPECT_EQ(empty.value, 0.0);
}

TEST(PartialExercise, ExhaustiveScanAndInteriorOptimum) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> spot(1.5, 3.5), gam(0.05, 2.0);
    int interior = 0;
    for (int s = 0; s < 300; ++s) {
        const auto draw = esopt::testing::draw_feasible(rng, 1);
        const double y0 = spot(rng), g = gam(rng);
        const int a_total = 10;
        const auto r = one_period_partial_exercise(a_total, y0, 2.0, draw.sp, RiskAversion(g));

        double best = -1e300;
        int best_a = -1;
        for (int a = 0; a <= a_total; ++a) {
            const double v = a * std::max(y0 - 2.0, 0.0) +
                             price_g({(a_total - a) * std::max(draw.sp.h * y0 - 2.0, 0.0),
                                      (a_total - a) * std::max(draw.sp.ell * y0 - 2.0, 0.0)},
                                     draw.sp, RiskAversion(g));
            if (v > best) {
                best = v;
                best_a = a;
            }
        }
        EXPECT_EQ(r.a_star, best_a);
        EXPECT_EQ(r.value, best);
        if (r.a_star > 0 && r.a_star < a_total) ++interior;
    }
    // Nonlinear pricing makes exercising part of the package optimal somewhere.
    EXPECT_GT(interior, 0);
}
