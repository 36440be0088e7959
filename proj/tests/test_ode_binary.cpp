#include "binapprox/metrics.hpp"
#include "binapprox/ode_binary.hpp"
#include "binapprox/preprocess.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace binapprox;

namespace {

DriftField zero_drift() { return {[](double, double) { return 0.0; }, 0.0}; }

// f = -tanh(x/2): sup |f| = 1, |f| + |f'| <= 1.
DriftField capped_drift() { return {[](double x, double) { return -std::tanh(0.5 * x); }, 1.0}; }

TEST(Certify, AcceptsValidCertificate) {
    EXPECT_NO_THROW(certify_drift(capped_drift(), 1.0, -10, 10, 1.0));
}

TEST(Certify, RejectsDriftAboveK) {
    EXPECT_THROW(certify_drift(capped_drift(), 0.5, -10, 10, 1.0), std::invalid_argument);
}

TEST(Certify, RejectsUnderstatedLipschitzBound) {
    DriftField d{[](double x, double) { return std::sin(3 * x) * 0.1; }, 0.2};  // |f|+|f'| up to 0.4
    EXPECT_THROW(certify_drift(d, 1.0, -2, 2, 1.0), std::invalid_argument);
}

TEST(Solve, ZeroDriftIsPlainTracking) {
    // f = 0: r = x_moll - x0, y tracks it, u = x0 + y.
    TimeGrid g(1.0, 1024);
    auto x = gen_wiener(g, 11);
    auto xm = mollify(clip(x, 3.0), 8.0);
    TrackerParams p{64, 3.0, xm.effective_p(), 0.0};
    auto sol = solve_binary_ode(xm.path, x.front(), zero_drift(), p, TrackMode::affine);

    std::vector<double> shifted(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) shifted[j] = xm.path[j] - x.front();
    auto tr = track_affine(SampledPath(g, shifted), TrackerParams{64, 3.0, xm.effective_p(), 0.0});
    EXPECT_EQ(sol.y.directions(), tr.path.directions());
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(sol.u[j], x.front() + sol.y_fine[j], 1e-12);
    EXPECT_TRUE(sol.verified);
}

TEST(Solve, ConstantDriftShiftsResidual) {
    // f = c: r = x_moll - x0 - c t exactly.
    TimeGrid g(1.0, 256);
    auto x = gen_wiener(g, 5);
    auto xm = mollify(clip(x, 2.0), 4.0);
    const double c = 0.3;
    DriftField d{[c](double, double) { return c; }, c};
    auto sol = solve_binary_ode(xm.path, 0.0, d, TrackerParams{32, 2.0, xm.effective_p(), c}, TrackMode::affine);
    for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_NEAR(sol.r[j], xm.path[j] - c * g.time(j), 1e-12);
        EXPECT_NEAR(sol.u[j], c * g.time(j) + sol.y_fine[j], 1e-12);
    }
}

TEST(Solve, CompositeBoundAndIdentity) {
    TimeGrid g(1.0, 4096);
    const auto d = capped_drift();
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto x = gen_ito(g, d.f, [](double, double) { return 1.0; }, 0.0, s);
        auto xm = mollify(clip(x, 5.0), 8.0);
        TrackerParams p{256, 5.0, xm.effective_p(), 1.0};
        auto sol = solve_binary_ode(xm.path, x.front(), d, p, TrackMode::affine);
        ASSERT_TRUE(sol.verified);
        EXPECT_LE(sup_error(xm.path, sol.u), binary_ode_bound(p, d.c_f, 1.0, TrackMode::affine) + 1e-9);
        auto rt = residual_true(xm.path, x.front(), d, sol.u);
        for (std::size_t j = 0; j < g.size(); ++j) {
            EXPECT_NEAR(std::abs(xm.path[j] - sol.u[j]), std::abs(rt[j] - sol.y_fine[j]), 1e-9);
        }
    }
}

TEST(Solve, StepModeBound) {
    TimeGrid g(1.0, 4096);
    const auto d = capped_drift();
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto x = gen_ito(g, d.f, [](double, double) { return 1.0; }, 0.0, 100 + s);
        auto xm = mollify(clip(x, 5.0), 8.0);
        TrackerParams p{256, 5.0, xm.effective_p(), 1.0};
        auto sol = solve_binary_ode(xm.path, x.front(), d, p, TrackMode::step);
        EXPECT_LE(sup_error(xm.path, sol.u), binary_ode_bound(p, d.c_f, 1.0, TrackMode::step) + 1e-9);
        EXPECT_EQ(sol.y.directions().size(), 256u);
    }
}

TEST(Solve, RejectsDriftBudgetBelowSup) {
    // The probe covers [-1, 1] here, where |f| reaches tanh(1/2) > 0.3.
    TimeGrid g(1.0, 64);
    SampledPath z(g, std::vector<double>(65, 0.0));
    EXPECT_THROW(solve_binary_ode(z, 0.0, capped_drift(), TrackerParams{8, 1, 1, 0.3}, TrackMode::affine),
                 std::invalid_argument);
}

TEST(Bound, ClosedForm) {
    TrackerParams p{100, 1.0, 2.0, 1.0};  // M = 5
    EXPECT_DOUBLE_EQ(frozen_drift_bound(p, 1.0, 2.0), 2.0 * 1.0 * 6.0 * 2.0 / 100);
    EXPECT_DOUBLE_EQ(binary_ode_bound(p, 1.0, 2.0, TrackMode::affine), 2 * 5 * 0.02 + 0.24);
    EXPECT_DOUBLE_EQ(binary_ode_bound(p, 1.0, 2.0, TrackMode::step), 4 * 5 * 0.02 + 0.24);
}

TEST(Residual, ClosedForms) {
    TimeGrid g(1.0, 50);
    auto x = gen_wiener(g, 8);
    SampledPath u(g, std::vector<double>(g.size(), x.front()));
    auto r0 = residual_true(x, x.front(), zero_drift(), u);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(r0[j], x[j] - x.front());
    DriftField c{[](double, double) { return 0.7; }, 0.7};
    auto rc = residual_true(x, x.front(), c, u);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(rc[j], x[j] - x.front() - 0.7 * g.time(j), 1e-14);
}

TEST(Solve, LinearPathWithConstantDrift) {
    // x = x0 + c t solves dx = c dt; u must follow x_mp within the bound.
    TimeGrid g(1.0, 2048);
    const double c = 0.4;
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = 1.0 + c * g.time(j);
    SampledPath x(g, v);
    auto xm = mollify(clip(x, 2.0), 16.0);
    DriftField d{[c](double, double) { return c; }, c};
    TrackerParams p{128, 2.0, xm.effective_p(), c};
    auto sol = solve_binary_ode(xm.path, 1.0, d, p, TrackMode::affine);
    EXPECT_LE(sup_error(xm.path, sol.u), binary_ode_bound(p, c, 1.0, TrackMode::affine) + 1e-9);
    // r differs from x_mp - x0 - c t only through the mollifier transient.
    for (std::size_t j = 128; j < g.size(); ++j) {
        EXPECT_NEAR(sol.r[j], xm.path[j] - 1.0 - c * g.time(j), 1e-12);
    }
}

TEST(Solve, FrozenDriftResidualGap) {
    TimeGrid g(1.0, 4096);
    const auto d = capped_drift();
    auto x = gen_wiener(g, 31);
    auto xm = mollify(clip(x, 4.0), 8.0);
    TrackerParams p{256, 4.0, xm.effective_p(), 1.0};
    auto sol = solve_binary_ode(xm.path, 0.0, d, p, TrackMode::affine);
    auto rt = residual_true(xm.path, 0.0, d, sol.u);
    EXPECT_LE(sup_error(rt, sol.r), frozen_drift_bound(p, d.c_f, 1.0) + 1e-9);
}

}  // namespace
