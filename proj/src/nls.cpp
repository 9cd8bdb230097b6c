#include "capwave/nls.hpp"

#include <cmath>

#include "capwave/dispersion.hpp"
#include "capwave/kernels.hpp"
#include "capwave/spectral.hpp"

namespace capwave {

const char* provenance_name(NuProvenance p) {
    return p == NuProvenance::user_supplied ? "user_supplied" : "quadratic_truncated_derivation";
}

NLSCoeffs nls_coefficients_user(double k0, double b, double nu) {
    const ModelParams p(k0, b);
    NLSCoeffs c;
    c.half_omega2 = 0.5 * p.omega2;
    c.nu = nu;
    c.provenance = NuProvenance::user_supplied;
    return c;
}

NLSCoeffs nls_coefficients(double k0, double b, double tol) {
    const ModelParams p(k0, b);
    const double w2 = omega(2.0 * k0, b), w0 = p.omega0, cg = p.cg, w0p = omega_deriv(0.0, b, 1);

    NLSCoeffs c;
    c.half_omega2 = 0.5 * p.omega2;
    c.provenance = NuProvenance::quadratic_truncated_derivation;
    c.harmonic_denominator = {-2.0 * w0 + w2, -2.0 * w0 - w2};
    c.mean_denominator = {w0p - cg, -w0p - cg};
    if (std::abs(c.harmonic_denominator[0]) < tol)
        throw NonresonanceError("second_harmonic_resonance",
                                "omega(2 k0) = 2 omega(k0) within " + std::to_string(tol));
    if (std::abs(c.mean_denominator[0]) < tol)
        throw NonresonanceError("group_velocity_matches_long_wave_speed",
                                "c_g = omega'(0) within " + std::to_string(tol));
    if (std::abs(p.omega2) < tol)
        throw NonresonanceError("vanishing_dispersion", "omega''(k0) = 0 within " + std::to_string(tol));

    // the u_-1/u_1 block is closed, so one carrier period carries every interaction needed
    const Grid1D grid(16, 2.0 * M_PI / k0);
    const TruncatedModel model(grid, b);
    auto ext = [&](int eq, int cu, int cv, long l, long m) {
        return extract_kernel(model_component_op(model, eq, cu, cv), grid, l, m);
    };
    auto pol = [&](int eq, int cu, int cv, long l, long m) { return ext(eq, cu, cv, l, m) + ext(eq, cv, cu, m, l); };

    const int comps[2] = {m1, p1};
    cplx bracket = 0.0;
    for (int i = 0; i < 2; ++i) {
        const int j = comps[i];
        // second harmonic: (-2 i w0 - lambda_j(2k0)) A_2 = S_j(k0,k0) A^2
        c.second_harmonic[i] = ext(j, m1, m1, 1, 1) / (cplx(0.0, 1.0) * c.harmonic_denominator[i]);
        // mean flow: (-i kappa cg - lambda_j(kappa)) M = P_j(kappa; k0 + kappa, -k0) |A|^2 as kappa -> 0
        const double h = 1e-4;
        auto beta_at = [&](double kap) { return polarized_symbol(j, m1, m1, k0 + kap, -k0, b) / cplx(0.0, kap); };
        const cplx beta = 0.5 * (beta_at(h) + beta_at(-h));
        c.mean_flow[i] = beta / c.mean_denominator[i];
        bracket += c.second_harmonic[i] * pol(m1, m1, j, -1, 2) + c.mean_flow[i] * pol(m1, m1, j, 1, 0);
    }
    const cplx nu = cplx(0.0, -1.0) * bracket;
    c.nu = nu.real();
    c.nu_imag = nu.imag();
    return c;
}

namespace {

void linear_half(EnvelopeField& f, const NLSCoeffs& c, double h) {
    CVec hat;
    detail::fft_forward(f.A, hat);
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double K = f.grid.wavenumber(i);
        hat[i] *= std::exp(cplx(0.0, -c.half_omega2 * K * K * h));
    }
    detail::fft_backward(hat, f.A);
}

}  // namespace

void nls_step(EnvelopeField& f, const NLSCoeffs& c, double dtau) {
    linear_half(f, c, 0.5 * dtau);
    for (auto& a : f.A) a *= std::exp(cplx(0.0, c.nu * std::norm(a) * dtau));
    linear_half(f, c, 0.5 * dtau);
    f.tau += dtau;
}

NLSTrajectory nls_solve(const EnvelopeField& A0, const NLSCoeffs& c, double dtau, double tau_end, int stride) {
    if (!(dtau > 0.0)) throw std::invalid_argument("nls solve: dtau must be positive");
    if (A0.A.size() != A0.grid.size()) throw std::invalid_argument("nls solve: envelope size mismatch");
    const long steps = std::lround(tau_end / dtau);
    NLSTrajectory tr;
    EnvelopeField f = A0;
    tr.snapshots.push_back(f);
    for (long i = 1; i <= steps; ++i) {
        nls_step(f, c, dtau);
        for (const auto& a : f.A)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw std::runtime_error("nls solve: non-finite amplitude at step " + std::to_string(i));
        if ((stride > 0 && i % stride == 0) || i == steps) tr.snapshots.push_back(f);
    }
    return tr;
}

EnvelopeField nls_evolve(const EnvelopeField& A0, const NLSCoeffs& c, double dtau, double tau_end) {
    return nls_solve(A0, c, dtau, tau_end, 0).snapshots.back();
}

double envelope_mass(const EnvelopeField& f) {
    double s = 0.0;
    for (const auto& a : f.A) s += std::norm(a);
    return s * f.grid.spacing();
}

CVec nls_rhs(const EnvelopeField& f, const NLSCoeffs& c) {
    CVec hat;
    detail::fft_forward(f.A, hat);
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double K = f.grid.wavenumber(i);
        hat[i] *= cplx(0.0, -c.half_omega2 * K * K);
    }
    CVec out;
    detail::fft_backward(hat, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += cplx(0.0, c.nu * std::norm(f.A[i])) * f.A[i];
    return out;
}

}  // namespace capwave
