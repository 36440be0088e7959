#include "binapprox/adaptive.hpp"
#include "binapprox/errors.hpp"
#include "binapprox/metrics.hpp"
#include "binapprox/preprocess.hpp"
#include "binapprox/tracker.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace binapprox;

namespace {

SampledPath sine(const TimeGrid& g, double amp, double freq) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = amp * std::sin(freq * g.time(j));
    return SampledPath(g, std::move(v));
}

SampledPath flat(const TimeGrid& g, double s) { return SampledPath(g, std::vector<double>(g.size(), s)); }

HoelderParams params(double q, double theta, double eps0, SampledPath sigma) {
    double c = sigma.max_abs();
    return HoelderParams{.q = q, .theta = theta, .eps0 = eps0, .bound_c = c, .sigma = std::move(sigma)};
}

TEST(Certificate, SineAcceptedAtItsLipschitzConstant) {
    // |A sin(w t) - A sin(w s)| <= A w |t - s|
    TimeGrid g(1.0, 8192);
    auto x = sine(g, 0.5, 6.0);
    auto ok = check_hoelder(x, params(1.0, 0.05, 0.05, flat(g, 3.0)));
    EXPECT_TRUE(ok.holds);
    EXPECT_LE(ok.worst_ratio, 3.0);
    EXPECT_EQ(ok.rows.size(), g.size());
    auto bad = check_hoelder(x, params(1.0, 0.05, 0.05, flat(g, 1.5)));
    EXPECT_FALSE(bad.holds);
    EXPECT_GT(bad.worst_ratio, 1.5);
}

TEST(Certificate, HalfHoelderSquareRoot) {
    // sqrt is 1/2-Hoelder with constant 1.
    TimeGrid g(1.0, 1024);
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sqrt(g.time(j));
    SampledPath x(g, v);
    EXPECT_TRUE(check_hoelder(x, params(0.5, 0.1, 0.1, flat(g, 1.0))).holds);
    EXPECT_FALSE(check_hoelder(x, params(1.0, 0.1, 0.1, flat(g, 1.0))).holds);
}

TEST(Certificate, RejectsWienerAtQOne) {
    TimeGrid g(1.0, 8192);
    auto w = gen_wiener(g, 21);
    EXPECT_FALSE(check_hoelder(w, params(1.0, 0.01, 0.01, flat(g, 10.0))).holds);
}

TEST(Certificate, ModulusIsReadThetaEarlier) {
    // x has slope 1 from t = 0.5; sigma must already be 1 at t - theta.
    TimeGrid g(1.0, 1000);
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::max(0.0, g.time(j) - 0.5);
    SampledPath x(g, v);
    auto sigma_at = [&](double from) {
        std::vector<double> s(g.size());
        for (std::size_t j = 0; j < s.size(); ++j) s[j] = g.time(j) >= from - 1e-12 ? 1.0 : 0.0;
        return SampledPath(g, s);
    };
    EXPECT_FALSE(check_hoelder(x, params(1.0, 0.1, 0.05, sigma_at(0.45))).holds);
    EXPECT_TRUE(check_hoelder(x, params(1.0, 0.1, 0.05, sigma_at(0.4))).holds);
}

TEST(Track, ConstantModulusMatchesAffineTracker) {
    // q = 1, sigma = s: same as the affine tracker with rate s on the
    // delta-window average.
    TimeGrid g(1.0, 4096);
    auto x = sine(g, 0.2, 10.0);
    const std::size_t n = 128;
    auto at = track_adaptive(x, params(1.0, 0.05, 0.05, flat(g, 2.0)), n);
    auto moll = mollify(x, static_cast<double>(n));
    auto ref = track_affine(moll.path, TrackerParams{n, 1.0, 1.0, 0.0});  // rate 2
    EXPECT_EQ(at.directions, ref.path.directions());
    auto y = eval_binomial(ref.path, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(at.y[j], y[j], 1e-12);
    EXPECT_DOUBLE_EQ(at.bound, 2.0 * 2.0 / n);
    EXPECT_TRUE(at.verified);
}

TEST(Track, PiecewiseModulusBound) {
    TimeGrid g(1.0, 8192);
    std::vector<double> v(g.size()), s(g.size());
    const double x06 = 0.01 * std::sin(12.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double t = g.time(j);
        v[j] = t < 0.6 ? 0.01 * std::sin(20 * t) : x06 + 0.05 * std::sin(20 * (t - 0.6));
        s[j] = t < 0.5 ? 0.2 : 1.0;
    }
    SampledPath x(g, v);
    auto at = track_adaptive(x, params(1.0, 0.1, 0.05, SampledPath(g, s)), 256);
    EXPECT_TRUE(at.certificate.holds);
    EXPECT_TRUE(at.verified);
    EXPECT_LE(sup_error(at.y, at.target), at.bound + 1e-9);
    EXPECT_DOUBLE_EQ(at.slopes.front(), 0.2);
    EXPECT_DOUBLE_EQ(at.slopes.back(), 1.0);
}

TEST(Track, Preconditions) {
    TimeGrid g(1.0, 1024);
    auto x = sine(g, 1.0, 5.0);
    EXPECT_THROW(track_adaptive(x, params(1.0, 0.05, 0.05, flat(g, 1.0)), 64), PreconditionFailure);
    EXPECT_THROW(track_adaptive(x, params(1.0, 0.05, 0.05, flat(g, 5.0)), 8), std::invalid_argument);
    EXPECT_THROW(check_hoelder(x, params(1.5, 0.05, 0.05, flat(g, 5.0))), std::invalid_argument);
    EXPECT_THROW(check_hoelder(x, params(1.0, 0.0001, 0.05, flat(g, 5.0))), std::invalid_argument);
    EXPECT_THROW(check_hoelder(x, params(1.0, 0.05, 0.05, flat(TimeGrid(1.0, 512), 5.0))),
                 std::invalid_argument);
}

TEST(Certificate, UnitSineAndConstants) {
    TimeGrid g(1.0, 2048);
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sin(g.time(j));
    SampledPath x(g, v);
    for (double theta : {0.01, 0.2, 0.9}) EXPECT_TRUE(check_hoelder(x, params(1.0, theta, 0.05, flat(g, 1.0))).holds);
    SampledPath c(g, std::vector<double>(g.size(), 4.0));
    for (double q : {0.1, 0.5, 1.0}) {
        EXPECT_TRUE(check_hoelder(c, HoelderParams{.q = q, .theta = 0.1, .eps0 = 0.1, .bound_c = 1.0,
                                                   .sigma = flat(g, 0.0)}).holds);
    }
}

TEST(Track, ZeroModulusOnConstant) {
    TimeGrid g(1.0, 1024);
    SampledPath c(g, std::vector<double>(g.size(), 4.0));
    auto at = track_adaptive(c, HoelderParams{.q = 1.0, .theta = 0.1, .eps0 = 0.1, .bound_c = 1.0,
                                              .sigma = flat(g, 0.0)}, 64);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(at.y[j], 4.0);
    EXPECT_EQ(at.bound, 0.0);
}

TEST(Track, UnitSineBound) {
    TimeGrid g(1.0, 8192);
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sin(g.time(j));
    auto at = track_adaptive(SampledPath(g, v), params(1.0, 0.05, 0.05, flat(g, 1.0)), 256);
    EXPECT_DOUBLE_EQ(at.bound, 2.0 / 256);
    EXPECT_LE(sup_error(at.y, at.target), at.bound + 1e-9);
}

}  // namespace
