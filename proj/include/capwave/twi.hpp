#pragma once

#include <string>
#include <vector>

#include "capwave/grid.hpp"

namespace capwave {

// interaction coefficient of the u_-1 equation with both inputs in u_-1 (polarized symbol)
cplx b11(double k, double l, double m, double b);

struct TWICoeffs {
    cplx c0, c1, c2;
    double k0 = 0.0, k1 = 0.0, b = 0.0;
    int ell = 1;
    double resonance_defect = 0.0;  // |omega sum| over the triad
    std::string warning;
    // grid-based extraction only: the wavenumbers actually used
    double k1_used = 0.0;
};

// triad (-ell k0, ell k1, -ell(k1-k0)) from the analytic symbols
TWICoeffs twi_coeffs(double k0, double k1, int ell, double b);
// same triad extracted pseudo-spectrally from the model on L = 2 pi j0 / k0; k1 is rounded to the
// nearest grid wavenumber and the rounding is reported in k1_used
TWICoeffs twi_coeffs_extracted(double k0, double k1, int ell, double b, long j0 = 64);

struct TWIState {
    cplx A0, A1, A2;
    double tau = 0.0;
};

struct TWISample {
    double tau;
    cplx A0, A1, A2;
    double E;
};

struct TWITrajectory {
    std::vector<TWISample> samples;
    bool blew_up = false;
};

// dA0 = c0 conj(A1 A2), dA1 = c1 conj(A0 A2), dA2 = c2 conj(A0 A1)
TWIState twi_rhs(const TWIState& s, const TWICoeffs& c);
TWIState twi_step(const TWIState& s, const TWICoeffs& c, double dt);
TWITrajectory integrate(const TWIState& s0, const TWICoeffs& c, double dt, double t_end, int stride = 1);
double conserved_E(const TWIState& s, const TWICoeffs& c);
double default_dt(const TWIState& s, const TWICoeffs& c);

struct GrowthReport {
    double rate = 0.0;  // least-squares slope of log|A1|
    double amplification = 1.0;
};
// the perturbation of the NLS subspace from A0 = 1, A1 = A2 = 1e-4
GrowthReport stability_experiment(const TWICoeffs& c, double t_end = 20.0);

}  // namespace capwave
