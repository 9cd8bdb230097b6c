#include <cmath>
#include <random>

#include "capwave/dispersion.hpp"
#include "doctest.h"

using namespace capwave;

// oracle values: 30-digit mpmath evaluation of the closed forms, frozen
constexpr double kOmega2 = 1.3885442593420037498;
constexpr double kOmegaPrime2 = 0.39801728405327662229;
constexpr double kOmegaSecond2 = -0.16130967340229862367;
constexpr double kOmegaPrime2b005 = 0.56276225832849483689;
constexpr double kSigma3b02 = 2.9054683814894611648;

TEST_CASE("omega values") {
    for (double b : {0.0, 0.1, 1.0, 5.0}) CHECK(omega(0.0, b) == 0.0);
    CHECK(omega(2.0, 0.0) == doctest::Approx(kOmega2).epsilon(1e-14));
    CHECK(omega(2.0, 0.1) == doctest::Approx(1.6429477241264517).epsilon(1e-14));
}

TEST_CASE("omega is odd") {
    for (double b : {0.0, 0.05, 1.0 / 3.0})
        for (double k = 0.25; k <= 50.0; k += 0.25) CHECK(omega(-k, b) == -omega(k, b));
}

TEST_CASE("sigma identities") {
    for (double b : {0.0, 0.2, 2.0}) {
        CHECK(sigma(0.0, b) == 1.0);
        for (double k = 0.1; k < 20.0; k += 0.37)
            CHECK(sigma(k, b) * sigma(k, b) * std::tanh(k) == doctest::Approx(k + b * k * k * k).epsilon(1e-13));
        const double k = 20.0;
        CHECK(std::abs(sigma(k, b) / (std::sqrt(k) * std::sqrt(1.0 + b * k * k)) - 1.0) < 1e-8);
    }
    CHECK(sigma(3.0, 0.2) == doctest::Approx(kSigma3b02).epsilon(1e-14));
    CHECK(sigma_inv(3.0, 0.2) * sigma(3.0, 0.2) == doctest::Approx(1.0));
}

TEST_CASE("omega derivatives against the high-precision oracle") {
    CHECK(omega_deriv(2.0, 0.0, 1) == doctest::Approx(kOmegaPrime2).epsilon(1e-12));
    CHECK(std::abs(omega_deriv(2.0, 0.0, 1) - 0.39803) < 1e-4);
    CHECK(omega_deriv(2.0, 0.0, 2) == doctest::Approx(kOmegaSecond2).epsilon(1e-12));
    CHECK(omega_deriv(2.0, 0.05, 1) == doctest::Approx(kOmegaPrime2b005).epsilon(1e-12));
    CHECK(omega_deriv(0.0, 0.3, 1) == 1.0);
    CHECK_THROWS_AS(omega_deriv(1.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("property: derivatives match central differences and have the right parity") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> kd(0.01, 12.0), bd(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double k = kd(rng), b = bd(rng), h = 1e-5 * std::max(1.0, k);
        const double fd1 = (omega(k + h, b) - omega(k - h, b)) / (2 * h);
        const double fd2 = (omega_deriv(k + h, b, 1) - omega_deriv(k - h, b, 1)) / (2 * h);
        const double fd3 = (omega_deriv(k + h, b, 2) - omega_deriv(k - h, b, 2)) / (2 * h);
        CHECK(omega_deriv(k, b, 1) == doctest::Approx(fd1).epsilon(1e-7));
        CHECK(std::abs(omega_deriv(k, b, 2) - fd2) < 1e-6 * (1.0 + std::abs(fd2)));
        CHECK(std::abs(omega_deriv(k, b, 3) - fd3) < 1e-6 * (1.0 + std::abs(fd3)));
        CHECK(omega_deriv(-k, b, 1) == omega_deriv(k, b, 1));
        CHECK(omega_deriv(-k, b, 2) == -omega_deriv(k, b, 2));
    }
}

TEST_CASE("series branch joins the closed form near k = 0") {
    for (double b : {0.0, 0.2, 1.0 / 3.0, 1.0})
        for (int order = 1; order <= 3; ++order) {
            const double below = omega_deriv(0.999e-3, b, order), above = omega_deriv(1.001e-3, b, order);
            CHECK(std::abs(below - above) < 1e-5);
        }
}

TEST_CASE("strong surface tension gives a convex branch") {
    for (double k = 0.01; k <= 50.0; k += 0.05) CHECK(omega_deriv(k, 1.0 / 3.0, 2) > 0.0);
}

TEST_CASE("K0 symbol") {
    CHECK(k0_symbol(0.0) == std::complex<double>(0.0, 0.0));
    CHECK(std::abs(k0_symbol(40.0) - std::complex<double>(0.0, -1.0)) < 1e-15);
    for (double k = -6.0; k <= 6.0; k += 0.1) {
        const auto s = k0_symbol(k);
        const double sech = 1.0 / std::cosh(k);
        CHECK(std::abs(1.0 + s * s - sech * sech) < 1e-15);
    }
}

TEST_CASE("model parameters") {
    const ModelParams p(2.0, 0.0);
    CHECK(p.omega0 == doctest::Approx(kOmega2));
    CHECK(p.cg == doctest::Approx(kOmegaPrime2));
    CHECK(p.omega2 == doctest::Approx(kOmegaSecond2));
    CHECK_THROWS_AS(ModelParams(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, -0.1), std::invalid_argument);
}
