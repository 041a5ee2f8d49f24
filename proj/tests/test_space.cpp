#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fha/space.hpp"

using namespace fha;

TEST_CASE("cycle metric and ball volumes") {
    Space c8 = build_space(SpaceKind::cycle, 8);
    CHECK(c8.d(0, 4) == doctest::Approx(4.0));
    CHECK(c8.ball_volume(0, 1.5) == doctest::Approx(3.0)); // {7,0,1}
    CHECK(c8.ball_volume(0, 100.0) == doctest::Approx(8.0));
    CHECK(c8.ball_volume(3, 0.5) == doctest::Approx(1.0)); // singleton below min distance

    Space c16 = build_space(SpaceKind::cycle, 16);
    CHECK(c16.total_measure() == doctest::Approx(16.0));

    Space p2 = build_space(SpaceKind::path, 2);
    CHECK(p2.d(0, 1) == doctest::Approx(1.0));
    CHECK(p2.quasi_const() == doctest::Approx(1.0));
}

TEST_CASE("invalid distance tables are rejected") {
    // asymmetric
    CHECK_THROWS(Space(2, {0.0, 1.0, 2.0, 0.0}, {1.0, 1.0}));
    // negative
    CHECK_THROWS(Space(2, {0.0, -1.0, -1.0, 0.0}, {1.0, 1.0}));
    // zero off-diagonal
    CHECK_THROWS(Space(2, {0.0, 0.0, 0.0, 0.0}, {1.0, 1.0}));
    // nonpositive weight
    CHECK_THROWS(Space(2, {0.0, 1.0, 1.0, 0.0}, {1.0, 0.0}));
}

TEST_CASE("json graph builder") {
    nlohmann::json j = {{"n", 3},
                        {"edges", {{0, 1, 1.0}, {1, 2, 2.0}}},
                        {"weights", {1.0, 2.0, 1.0}}};
    Space s = build_space_from_json(j);
    CHECK(s.d(0, 2) == doctest::Approx(3.0));
    CHECK(s.total_measure() == doctest::Approx(4.0));
}

TEST_CASE("ball volume is nondecreasing in the radius") {
    Space s = build_space(SpaceKind::grid2d, 16);
    for (int x = 0; x < s.size(); ++x) {
        double prev = 0.0;
        for (double r = 0.25; r <= 8.0; r += 0.25) {
            double v = s.ball_volume(x, r);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("doubling exponents on model spaces") {
    Space c64 = build_space(SpaceKind::cycle, 64);
    DoublingReport r1 = fit_doubling(c64);
    CHECK(r1.n == doctest::Approx(1.0).epsilon(0.15));
    CHECK(r1.n_tilde >= 0.0);
    CHECK(r1.n_tilde <= r1.n + 1e-12);

    Space g64 = build_space(SpaceKind::grid2d, 64); // 8x8
    DoublingReport r2 = fit_doubling(g64);
    CHECK(r2.n == doctest::Approx(2.0).epsilon(0.15)); // +-0.3 band
}

TEST_CASE("doubling constraint holds at the fitted pair over the sample grid") {
    Space s = build_space(SpaceKind::cycle, 32);
    DoublingReport rep = fit_doubling(s);
    for (int x = 0; x < s.size(); ++x)
        for (double r : default_r_grid(s))
            for (double lam : {1.0, 2.0, 4.0, 8.0}) {
                double lhs = s.ball_volume(x, lam * r);
                double rhs = rep.C_doubling * std::pow(lam, rep.n) * s.ball_volume(x, r);
                CHECK(lhs <= rhs * (1.0 + 1e-12));
            }
}

TEST_CASE("volumes saturate beyond the diameter") {
    Space p2 = build_space(SpaceKind::path, 2);
    // r past the diameter: doubling holds with constant 1
    for (double r : {2.0, 4.0, 16.0})
        for (int x = 0; x < 2; ++x)
            CHECK(p2.ball_volume(x, 2.0 * r) == doctest::Approx(p2.ball_volume(x, r)));
}

TEST_CASE("certified exponent never decreases under grid refinement") {
    Space s = build_space(SpaceKind::cycle, 64);
    std::vector<double> coarse = default_r_grid(s);
    std::vector<double> fine = coarse;
    for (size_t i = 0; i + 1 < coarse.size(); ++i)
        fine.push_back(std::sqrt(coarse[i] * coarse[i + 1]));
    std::sort(fine.begin(), fine.end());
    DoublingReport a = fit_doubling(s, coarse);
    DoublingReport b = fit_doubling(s, fine);
    CHECK(b.n_certified >= a.n_certified - 1e-12);
}

TEST_CASE("maximal function basics") {
    Space c8 = build_space(SpaceKind::cycle, 8);
    Signal ones(8, 1.0);
    Signal m1 = maximal_function(c8, ones, 1.0);
    for (double v : m1) CHECK(v == doctest::Approx(1.0));

    Signal delta(8, 0.0);
    delta[0] = 1.0;
    Signal md = maximal_function(c8, delta, 1.0);
    CHECK(md[0] == doctest::Approx(1.0)); // singleton ball attains the sup

    CHECK_THROWS(maximal_function(c8, ones, 0.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Signal f(8);
    for (double& v : f) v = u(rng);
    Signal absf(8);
    for (int i = 0; i < 8; ++i) absf[i] = std::abs(f[i]);
    Signal mf = maximal_function(c8, absf, 0.7);
    for (int i = 0; i < 8; ++i) CHECK(mf[i] >= absf[i] - 1e-12);
}

// vector-valued maximal inequality: the fitted constant over random batches
// of signals is stable across batches
TEST_CASE("vector maximal constant is stable across batches") {
    Space s = build_space(SpaceKind::cycle, 32);
    const double p = 2.0, q = 2.0, r = 1.0;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto batch_constant = [&]() {
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<Signal> fs(6, Signal(32));
            for (auto& f : fs)
                for (double& v : f) v = gauss(rng);
            Signal lhs(32, 0.0), rhs(32, 0.0);
            for (const auto& f : fs) {
                Signal absf(32);
                for (int i = 0; i < 32; ++i) absf[i] = std::abs(f[i]);
                Signal mf = maximal_function(s, absf, r);
                for (int i = 0; i < 32; ++i) {
                    lhs[i] += std::pow(mf[i], q);
                    rhs[i] += std::pow(std::abs(f[i]), q);
                }
            }
            for (int i = 0; i < 32; ++i) {
                lhs[i] = std::pow(lhs[i], 1.0 / q);
                rhs[i] = std::pow(rhs[i], 1.0 / q);
            }
            double ratio = lp_norm(s, lhs, p) / lp_norm(s, rhs, p);
            worst = std::max(worst, ratio);
        }
        return worst;
    };

    double c1 = batch_constant();
    double c2 = batch_constant();
    double c3 = batch_constant();
    double lo = std::min({c1, c2, c3}), hi = std::max({c1, c2, c3});
    CHECK(std::isfinite(hi));
    CHECK(hi <= 1.2 * lo); // stable within +-20%
}

TEST_CASE("lp norms") {
    Space p2 = build_space(SpaceKind::path, 2);
    Signal f = {3.0, -4.0};
    CHECK(lp_norm(p2, f, 2.0) == doctest::Approx(5.0));
    CHECK(lp_norm(p2, f, std::numeric_limits<double>::infinity()) == doctest::Approx(4.0));
    CHECK(lp_norm(p2, f, 1.0) == doctest::Approx(7.0));
}
