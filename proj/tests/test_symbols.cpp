#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fha/symbols.hpp"

using namespace fha;

TEST_CASE("dyadic partition of unity telescopes to one") {
    PartitionOfUnity pou = build_partition_of_unity();
    // exact support
    CHECK(pou(0.4) == 0.0);
    CHECK(pou(2.1) == 0.0);
    CHECK(pou(0.5) == 0.0);
    CHECK(pou(2.0) == 0.0);
    CHECK(pou(1.0) > 0.0);

    const int samples = 10000;
    for (int i = 0; i < samples; ++i) {
        double lambda = std::exp2(-20.0 + 40.0 * i / (samples - 1.0));
        double sum = 0.0;
        // psi(2^-j lambda) can only be nonzero for j within one of log2(lambda)
        int j0 = static_cast<int>(std::floor(std::log2(lambda)));
        for (int j = j0 - 2; j <= j0 + 2; ++j) sum += pou.at_scale(j, lambda);
        CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
}

TEST_CASE("sobolev norm oracle: windowed gaussian") {
    SpectralFunction g;
    g.name = "gaussian";
    g.support = {0.0, 8.0};
    g.eval = [](double x) -> Complex { return std::exp(-x * x); };

    const double pi = std::numbers::pi;
    SobolevResult r0 = sobolev_norm(g, 0.0, 2.0);
    CHECK(r0.converged);
    CHECK(r0.value == doctest::Approx(std::pow(pi / 2.0, 0.25)).epsilon(1e-4));

    // ||g||_{W^2_1}^2 = ||g||_2^2 + ||g'||_2^2 = 2 sqrt(pi/2)
    SobolevResult r1 = sobolev_norm(g, 1.0, 2.0);
    CHECK(r1.converged);
    CHECK(r1.value ==
          doctest::Approx(std::sqrt(2.0) * std::pow(pi / 2.0, 0.25)).epsilon(1e-4));
}

TEST_CASE("sobolev norm requires compact support and valid indices") {
    SpectralFunction g = gaussian_heat_symbol(1.0); // no support hint
    CHECK_THROWS(sobolev_norm(g, 1.0, 2.0));
    SpectralFunction b = mikhlin_bump();
    CHECK_THROWS(sobolev_norm(b, -1.0, 2.0));
    CHECK_THROWS(sobolev_norm(b, 1.0, 0.5));
}

TEST_CASE("dilation and product bookkeeping") {
    SpectralFunction b = mikhlin_bump();
    SpectralFunction d = dilate(b, 4.0);
    REQUIRE(d.support.has_value());
    CHECK(d.support->first == doctest::Approx(0.125));
    CHECK(d.support->second == doctest::Approx(0.5));
    CHECK(std::abs(d(0.25) - b(1.0)) == doctest::Approx(0.0));

    SpectralFunction p = product(b, gaussian_heat_symbol(1.0));
    REQUIRE(p.support.has_value());
    CHECK(p.support->first == doctest::Approx(0.5));
    CHECK(std::abs(p(1.0) - b(1.0) * std::exp(-1.0)) <= 1e-14);
}

TEST_CASE("sampled tables interpolate their nodes") {
    SpectralFunction f = from_samples({0.0, 1.0, 2.0}, {Complex(1.0), Complex(3.0), Complex(2.0)},
                                      "table");
    CHECK(std::abs(f(1.0) - Complex(3.0)) == 0.0);
    CHECK(std::abs(f(0.5) - Complex(2.0)) <= 1e-15); // linear midpoint
    CHECK(std::abs(f(5.0)) == 0.0);
    CHECK_THROWS(from_samples({1.0, 0.0}, {Complex(1.0), Complex(1.0)}, "bad"));
}

TEST_CASE("band-limited window has the stated normalization") {
    SpectralFunction phi = finite_propagation_window();
    CHECK(phi(0.0).real() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-9));
    CHECK(phi(0.0).imag() == 0.0);
    // even and real
    CHECK(phi(3.7).real() == doctest::Approx(phi(-3.7).real()));
    CHECK(phi(3.7).imag() == 0.0);
    // decays below the peak away from 0
    CHECK(std::abs(phi(40.0)) < std::abs(phi(0.0)));
}

TEST_CASE("imaginary power symbols have scale-invariant smoothness") {
    SpectralFunction f = power_imag(1.0);
    SpectralFunction eta = default_eta();
    // |lambda^{i beta}| = 1 and dilation only shifts the phase, so the cutoff
    // norm is the same at every t
    SobolevResult a = sobolev_norm(product(eta, dilate(f, 1.0)), 2.0, 2.0);
    SobolevResult b = sobolev_norm(product(eta, dilate(f, 7.3)), 2.0, 2.0);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-6));

    HormanderResult h1 = hormander_functional(power_imag(1.0), eta, 2.0, 2.0,
                                              default_t_grid(0.5, 2.0));
    HormanderResult h2 = hormander_functional(power_imag(2.0), eta, 2.0, 2.0,
                                              default_t_grid(0.5, 2.0));
    CHECK(h1.value > 0.0);
    CHECK(h2.value > h1.value); // rougher phase costs smoothness
}

TEST_CASE("mollified indicator keeps exact support") {
    SpectralFunction f = rough_indicator(1.0, 2.0, 0.25);
    CHECK(std::abs(f(0.999)) == 0.0);
    CHECK(std::abs(f(2.001)) == 0.0);
    CHECK(std::abs(f(1.5) - Complex(1.0)) <= 1e-12);
    CHECK_THROWS(rough_indicator(2.0, 1.0));
}

TEST_CASE("t grid is log uniform and inclusive") {
    std::vector<double> t = default_t_grid(0.1, 10.0);
    CHECK(t.front() == doctest::Approx(0.1));
    CHECK(t.back() == doctest::Approx(10.0));
    double ratio = t[1] / t[0];
    for (size_t i = 1; i + 1 < t.size(); ++i)
        CHECK(t[i + 1] / t[i] == doctest::Approx(ratio).epsilon(1e-9));
    CHECK_THROWS(default_t_grid(-1.0, 1.0));
}
