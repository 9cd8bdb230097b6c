#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "capwave/grid.hpp"

namespace capwave {

class NonresonanceError : public std::domain_error {
public:
    NonresonanceError(const std::string& reason, const std::string& detail)
        : std::domain_error(reason + ": " + detail), reason_(reason) {}
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

enum class NuProvenance { user_supplied, quadratic_truncated_derivation };
const char* provenance_name(NuProvenance p);

// A_tau = i half_omega2 A_xixi + i nu |A|^2 A
struct NLSCoeffs {
    double half_omega2 = 0.0;
    double nu = 0.0;
    NuProvenance provenance = NuProvenance::user_supplied;

    // quadratic-truncated derivation details, indexed by u_-1, u_1
    std::array<cplx, 2> second_harmonic{};  // amplitude of e^{2i(k0 a - w0 t)} per A^2
    std::array<cplx, 2> mean_flow{};        // amplitude of the mean per |A|^2
    std::array<double, 2> harmonic_denominator{};  // -2 w0 + w(2k0), -2 w0 - w(2k0)
    std::array<double, 2> mean_denominator{};      // w'(0) - cg, -w'(0) - cg
    double nu_imag = 0.0;  // imaginary part discarded from the derived coefficient
};

// derives nu for the quadratic-truncated system; throws NonresonanceError naming the failed condition
NLSCoeffs nls_coefficients(double k0, double b, double tol = 1e-8);
NLSCoeffs nls_coefficients_user(double k0, double b, double nu);

struct EnvelopeField {
    Grid1D grid;
    CVec A;  // samples at grid positions
    double tau = 0.0;
};

struct NLSTrajectory {
    std::vector<EnvelopeField> snapshots;
};

// one Strang step: half linear, full nonlinear phase, half linear
void nls_step(EnvelopeField& f, const NLSCoeffs& c, double dtau);
// snapshots every `stride` steps plus the final state
NLSTrajectory nls_solve(const EnvelopeField& A0, const NLSCoeffs& c, double dtau, double tau_end, int stride = 0);
EnvelopeField nls_evolve(const EnvelopeField& A0, const NLSCoeffs& c, double dtau, double tau_end);

double envelope_mass(const EnvelopeField& f);
// time derivative of A from the NLS right-hand side
CVec nls_rhs(const EnvelopeField& f, const NLSCoeffs& c);

}  // namespace capwave
