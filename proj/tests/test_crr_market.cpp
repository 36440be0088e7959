#include "binapprox/crr_market.hpp"
#include "binapprox/log_tracker.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace binapprox;

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bs_call(double s, double k, double vol, double r, double T) {
    const double d1 = (std::log(s / k) + (r + 0.5 * vol * vol) * T) / (vol * std::sqrt(T));
    const double d2 = d1 - vol * std::sqrt(T);
    return s * norm_cdf(d1) - k * std::exp(-r * T) * norm_cdf(d2);
}

CrrTree tree_for(double s0, double vol, double r, double T, std::size_t n) {
    const double delta = T / n;
    auto rates = rates_from_logslope(vol / std::sqrt(delta), delta);
    return CrrTree{s0, rates.down * delta, rates.up * delta, std::exp(r * delta), n};
}

Payoff call(double k) { return [k](double s) { return std::max(s - k, 0.0); }; }
Payoff put(double k) { return [k](double s) { return std::max(k - s, 0.0); }; }

TEST(RiskNeutral, Probability) {
    EXPECT_DOUBLE_EQ(risk_neutral_prob(0.1, 0.3), 0.25);
    EXPECT_THROW(risk_neutral_prob(1.0, 0.3), std::invalid_argument);
    EXPECT_THROW(risk_neutral_prob(0.1, 0.0), std::invalid_argument);
}

TEST(RiskNeutral, DiscountedPriceIsMartingale) {
    CrrTree t{50.0, 0.2, 0.3, 1.0, 6};
    const double p = risk_neutral_prob(t.down, t.up);
    for (std::size_t k = 0; k < 6; ++k) {
        for (std::size_t i = 0; i <= k; ++i) {
            EXPECT_NEAR(p * t.discounted(k + 1, i + 1) + (1 - p) * t.discounted(k + 1, i), t.discounted(k, i),
                        1e-12 * t.discounted(k, i));
        }
    }
}

TEST(Pricing, AtTheMoneyCallNearBlackScholes) {
    const double bs = bs_call(100, 100, 0.2, 0.0, 1.0);
    EXPECT_NEAR(bs, 7.965567455405804, 1e-9);
    const double crr = price_european(tree_for(100, 0.2, 0.0, 1.0, 500), call(100));
    EXPECT_NEAR(crr / bs - 1.0, 0.0, 0.005);
}

TEST(Pricing, WithInterestRate) {
    const double bs = bs_call(100, 95, 0.25, 0.05, 0.5);
    const double crr = price_european(tree_for(100, 0.25, 0.05, 0.5, 800), call(95));
    EXPECT_NEAR(crr / bs - 1.0, 0.0, 0.005);
}

TEST(Pricing, PutCallParity) {
    // C - P = S0 - K rho^{-n}
    for (double r : {0.0, 0.03}) {
        auto t = tree_for(100, 0.3, r, 2.0, 300);
        const double c = price_european(t, call(110));
        const double p = price_european(t, put(110));
        const double rhs = 100 - 110 * std::pow(t.rho, -300.0);
        EXPECT_NEAR((c - p) / rhs - 1.0, 0.0, 1e-10);
    }
}

TEST(Pricing, BackwardInductionEqualsDirectSum) {
    for (std::size_t n = 1; n <= 30; ++n) {
        auto t = tree_for(80, 0.4, 0.02, 1.0, n);
        const double a = price_european(t, call(85));
        const double b = price_european_direct(t, call(85));
        EXPECT_NEAR(a, b, 1e-11 * std::max(1.0, a)) << "n = " << n;
    }
}

TEST(Pricing, PathEnumeration) {
    // Oracle: sum over all 2^n paths with probability p^ups (1-p)^downs.
    const std::size_t n = 12;
    auto t = tree_for(100, 0.3, 0.01, 1.0, n);
    const double p = risk_neutral_prob(t.down, t.up);
    double total = 0.0;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        double s = t.s0, w = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool up = (mask >> k) & 1;
            s *= t.rho * (up ? 1 + t.up : 1 - t.down);
            w *= up ? p : 1 - p;
        }
        total += w * std::max(s - 100.0, 0.0);
    }
    total *= std::pow(t.rho, -static_cast<double>(n));
    EXPECT_NEAR(price_european(t, call(100)), total, 1e-11 * total);
}

TEST(Tree, Validation) {
    EXPECT_THROW((CrrTree{0.0, 0.1, 0.1, 1.0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((CrrTree{1.0, 1.0, 0.1, 1.0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((CrrTree{1.0, 0.1, 0.1, 0.9, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((CrrTree{1.0, 0.1, 0.1, 1.0, 0}.validate()), std::invalid_argument);
}

TEST(Tree, FromTrackerPath) {
    auto rates = rates_from_logslope(2.0, 0.25);
    MultiplicativePath y(1.0, 10.0, rates, {rates.up, -rates.down, rates.up, rates.up});
    auto rt = tree_from_tracker(y, 1.0);
    EXPECT_EQ(rt.up_moves, (std::vector<std::size_t>{0, 1, 1, 2, 3}));
    const auto nodes = y.nodes();
    for (std::size_t k = 0; k <= 4; ++k) {
        EXPECT_NEAR(rt.tree.price(k, rt.up_moves[k]), nodes[k], 1e-12 * nodes[k]);
    }
    MultiplicativePath odd(1.0, 10.0, rates, {0.1, 0.1, 0.1, 0.1});
    EXPECT_THROW(tree_from_tracker(odd, 1.0), std::invalid_argument);
}

TEST(RiskNeutral, SymmetricRates) { EXPECT_DOUBLE_EQ(risk_neutral_prob(0.2, 0.2), 0.5); }

TEST(Pricing, StockAndZeroStrikeCall) {
    auto t = tree_for(100, 0.3, 0.04, 1.0, 200);
    EXPECT_NEAR(price_european(t, [](double s) { return s; }), 100.0, 1e-10);
    EXPECT_NEAR(price_european(t, call(0.0)), 100.0, 1e-10);
    EXPECT_NEAR(price_european_direct(t, call(0.0)), 100.0, 1e-9);
}

TEST(Tree, RecombinationAndAllUp) {
    auto rates = rates_from_logslope(1.0, 0.5);
    MultiplicativePath ud(1.0, 1.0, rates, {rates.up, -rates.down});
    auto rt = tree_from_tracker(ud, 1.0);
    EXPECT_EQ(rt.up_moves.back(), 1u);  // middle of the 3 terminal nodes
    MultiplicativePath uu(1.0, 1.0, rates, {rates.up, rates.up});
    EXPECT_EQ(tree_from_tracker(uu, 1.0).up_moves.back(), 2u);
}

TEST(Tree, TrackerOnGeometricBrownianPaths) {
    TimeGrid g(1.0, 4096);
    ProcessSpec gbm;
    gbm.x0 = std::log(50.0);
    gbm.exponentiate = true;
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto lt = track_log(generate(gbm, g, s), TrackerParams{256, 5.0, 8.0, 0.0});
        auto rt = tree_from_tracker(lt.path, std::exp(0.02 / 256));
        const auto nodes = lt.path.nodes();
        for (std::size_t k = 0; k <= 256; ++k) {
            EXPECT_NEAR(rt.tree.discounted(k, rt.up_moves[k]), nodes[k], 1e-12 * nodes[k]);
        }
    }
}

}  // namespace
