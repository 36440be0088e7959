#pragma once

#include "binapprox/grid_paths.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testgen {

// Small hand-rolled generator for property tests. Every case gets its own
// seed so a failure can be replayed from the trace.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[index(0, v.size() - 1)];
    }
    std::uint64_t seed() { return rng_(); }

    // Power of two in [2^lo, 2^hi].
    std::size_t pow2(unsigned lo, unsigned hi) { return std::size_t{1} << index(lo, hi); }

    binapprox::SampledPath wiener(const binapprox::TimeGrid& grid, double scale = 1.0) {
        auto w = binapprox::gen_wiener(grid, seed());
        std::vector<double> v(w.values().begin(), w.values().end());
        for (double& x : v) x *= scale;
        return binapprox::SampledPath(grid, std::move(v));
    }

    // Rough path mixing a random walk, a sine and a few jumps.
    binapprox::SampledPath rough(const binapprox::TimeGrid& grid) {
        const double amp = uniform(0.1, 3.0);
        const double freq = uniform(0.5, 40.0);
        auto w = wiener(grid, uniform(0.0, 2.0));
        std::vector<double> v(grid.size());
        double jump = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (uniform(0.0, 1.0) < 0.002) jump += uniform(-2.0, 2.0);
            v[j] = w[j] + amp * std::sin(freq * grid.time(j)) + jump;
        }
        return binapprox::SampledPath(grid, std::move(v));
    }

private:
    std::mt19937_64 rng_;
};

template <class Fn>
void for_all(std::size_t cases, std::uint64_t seed, Fn&& fn) {
    std::mt19937_64 master(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::uint64_t s = master();
        SCOPED_TRACE("case " + std::to_string(c) + " seed " + std::to_string(s));
        Gen g(s);
        fn(g);
        if (::testing::Test::HasFatalFailure()) return;
    }
}

}  // namespace testgen
