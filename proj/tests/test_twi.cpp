#include <cmath>

#include "capwave/dispersion.hpp"
#include "capwave/resonance.hpp"
#include "capwave/stability.hpp"
#include "capwave/twi.hpp"
#include "doctest.h"

using namespace capwave;

namespace {

constexpr cplx I(0.0, 1.0);

TWICoeffs synthetic(cplx c0, cplx c1, cplx c2) {
    TWICoeffs c;
    c.c0 = c0;
    c.c1 = c1;
    c.c2 = c2;
    return c;
}

// c1/c2 real in both, which is all conservation of E needs
const TWICoeffs kStable = synthetic(I, I, -2.0 * I);   // c1/c2 = -1/2
const TWICoeffs kUnstable = synthetic(-I, I, I);       // c1/c2 = 1

double dist(const TWIState& a, const TWIState& b) {
    return std::abs(a.A0 - b.A0) + std::abs(a.A1 - b.A1) + std::abs(a.A2 - b.A2);
}

}  // namespace

TEST_CASE("triad coefficients") {
    const double k0 = 2.0, k1 = k1_of_b(2.0, 0.1);
    for (int ell : {-1, 1}) {
        const double a = ell * k0, e = ell * k1;
        CHECK(-a + e + (a - e) == 0.0);
    }
    const TWICoeffs p = twi_coeffs(k0, k1, 1, 0.1), m = twi_coeffs(k0, k1, -1, 0.1);
    CHECK(std::abs(p.c0 - std::conj(m.c0)) < 1e-12);
    CHECK(std::abs(p.c1 - std::conj(m.c1)) < 1e-12);
    CHECK(std::abs(p.c2 - std::conj(m.c2)) < 1e-12);
    CHECK(p.warning.empty());
    CHECK(p.resonance_defect < 1e-8);
    CHECK_FALSE(twi_coeffs(k0, 5.0, 1, 0.1).warning.empty());
}

TEST_CASE("ratio sign matches the stability module") {
    for (double b : {0.01, 0.05, 0.1}) {
        const StabilityVerdict v = stability(2.0, b);
        REQUIRE(v.resonant_k.size() == v.ratios.size());
        for (std::size_t i = 0; i < v.resonant_k.size(); ++i) {
            const TWICoeffs c = twi_coeffs(2.0, v.resonant_k[i], 1, b);
            CHECK(std::signbit((c.c1 / c.c2).real()) == std::signbit(v.ratios[i]));
        }
    }
}

TEST_CASE("pseudo-spectral coefficients agree with the analytic symbols on grid wavenumbers") {
    // j0 = 4 at k0 = 2 puts the grid wavenumbers on multiples of 1/2
    for (double b : {0.0, 0.1}) {
        const TWICoeffs a = twi_coeffs(2.0, 5.5, 1, b);
        const TWICoeffs e = twi_coeffs_extracted(2.0, 5.5, 1, b, 4);
        CHECK(e.k1_used == 5.5);
        CHECK(std::abs(a.c0 - e.c0) < 1e-10 * std::abs(a.c0));
        CHECK(std::abs(a.c1 - e.c1) < 1e-10 * std::abs(a.c1));
        CHECK(std::abs(a.c2 - e.c2) < 1e-10 * std::abs(a.c2));
    }
    const TWICoeffs r = twi_coeffs_extracted(2.0, 5.3, 1, 0.1, 4);
    CHECK(r.k1_used == 5.5);
    CHECK(r.warning.find("rounded") != std::string::npos);
}

TEST_CASE("invariant subspaces") {
    const TWIState m0{1.0 + 0.5 * I, 0.0, 0.0, 0.0};
    const TWITrajectory t0 = integrate(m0, kStable, 1e-2, 10.0);
    for (const auto& s : t0.samples) {
        CHECK(s.A0 == m0.A0);
        CHECK(s.A1 == 0.0);
        CHECK(s.A2 == 0.0);
        CHECK(s.E == 0.0);
    }
    const TWIState m1{0.0, 0.7, 0.0, 0.0}, m2{0.0, 0.0, -0.3 * I, 0.0};
    for (const auto& s : integrate(m1, kUnstable, 1e-2, 5.0).samples) {
        CHECK(s.A0 == 0.0);
        CHECK(s.A2 == 0.0);
    }
    for (const auto& s : integrate(m2, kUnstable, 1e-2, 5.0).samples) {
        CHECK(s.A0 == 0.0);
        CHECK(s.A1 == 0.0);
    }
}

TEST_CASE("conserved quantity") {
    CHECK(conserved_E({1.0, 0.0, 0.0, 0.0}, kStable) == 0.0);
    CHECK_THROWS_AS(conserved_E({1.0, 0.0, 0.0, 0.0}, synthetic(I, I, 0.0)), std::domain_error);

    const TWIState s0{1.0, 0.3, 0.2 * I, 0.0};
    const TWITrajectory tr = integrate(s0, kStable, 1e-3, 50.0, 100);
    CHECK_FALSE(tr.blew_up);
    const double e0 = tr.samples.front().E;
    double drift = 0.0;
    for (const auto& s : tr.samples) {
        drift = std::max(drift, std::abs(s.E - e0) / std::abs(e0));
        CHECK(s.E >= 0.0);
    }
    CHECK(drift <= 1e-8);

    // dE/dtau by central differences on a finely stored trajectory
    const TWITrajectory fine = integrate(s0, kStable, 1e-3, 2.0, 1);
    for (std::size_t i = 1; i + 1 < fine.samples.size(); i += 97) {
        const double d = (fine.samples[i + 1].E - fine.samples[i - 1].E) / 2e-3;
        CHECK(std::abs(d) <= 1e-7);
    }
}

TEST_CASE("extracted stable coefficients conserve E") {
    const double b = 1.0 / 200.0;
    const StabilityVerdict v = stability(2.0, b);
    REQUIRE(v.stable);
    REQUIRE(!v.resonant_k.empty());
    const TWICoeffs c = twi_coeffs(2.0, v.resonant_k.front(), 1, b);
    const TWIState s0{0.1, 0.05, 0.05, 0.0};
    const TWITrajectory tr = integrate(s0, c, 1e-3, 50.0, 1000);
    const double e0 = tr.samples.front().E;
    for (const auto& s : tr.samples) CHECK(std::abs(s.E - e0) <= 1e-8 * std::abs(e0));
}

TEST_CASE("instability of the NLS subspace iff the ratio is positive") {
    const GrowthReport u = stability_experiment(kUnstable);
    CHECK(u.amplification >= 10.0);
    CHECK(u.rate == doctest::Approx(1.0).epsilon(0.05));
    const GrowthReport s = stability_experiment(kStable);
    CHECK(s.amplification < 10.0);
}

TEST_CASE("RK4 order and time reversal") {
    const TWIState s0{1.0, 0.3, 0.2 * I, 0.0};
    auto run = [&](double dt, double T) {
        TWIState s = s0;
        const long n = std::lround(T / dt);
        for (long i = 0; i < n; ++i) s = twi_step(s, kUnstable, dt);
        return s;
    };
    const TWIState ref = run(1e-4, 2.0);
    const double e1 = dist(run(0.04, 2.0), ref), e2 = dist(run(0.02, 2.0), ref);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));

    TWIState s = run(1e-3, 3.0);
    for (int i = 0; i < 3000; ++i) s = twi_step(s, kUnstable, -1e-3);
    CHECK(dist(s, s0) <= 1e-8);
}

TEST_CASE("blow-up is flagged") {
    const TWITrajectory tr = integrate({10.0, 10.0, 10.0, 0.0}, synthetic(I, I, I), 1e-3, 100.0);
    CHECK(tr.blew_up);
    CHECK_THROWS_AS(integrate({1.0, 0.0, 0.0, 0.0}, kStable, 0.0, 1.0), std::invalid_argument);
}
