#include "capwave/wavepacket.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "capwave/spectral.hpp"

namespace capwave {

namespace {

// smallest even size >= n whose only prime factors are 2, 3 and 5
std::size_t next_smooth(std::size_t n) {
    for (std::size_t m = n + (n % 2);; m += 2) {
        std::size_t r = m;
        for (std::size_t f : {2, 3, 5})
            while (r % f == 0) r /= f;
        if (r == 1) return m;
    }
}

// spectrum of the envelope with the Nyquist mode removed and the optional truncation applied
CVec envelope_hat(const WavePacket& p, const CVec& samples) {
    CVec hat;
    detail::fft_forward(samples, hat);
    const Grid1D& g = p.A.grid;
    hat[g.size() / 2] = 0.0;
    if (p.truncated)
        for (std::size_t i = 0; i < hat.size(); ++i)
            if (p.eps * std::abs(g.wavenumber(i)) > p.delta0) hat[i] = 0.0;
    return hat;
}

// zero-padded resampling of a band-limited spectrum onto twice as many points
CVec refine(const CVec& hat) {
    const std::size_t n = hat.size(), n2 = 2 * n;
    CVec pad(n2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const long j = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
        pad[static_cast<std::size_t>(j < 0 ? j + static_cast<long>(n2) : j)] = hat[i];
    }
    CVec out;
    detail::fft_backward(pad, out);
    return out;
}

struct BandSpec {
    const CVec* hat;      // envelope-side spectrum, FFT order
    const CVec* hat_tau;  // its slow-time derivative (derivative mode only)
    double slow_length;   // period of the slow grid
    int harmonic;         // carrier multiple h
    cplx scale;
    bool add_conj;
};

// adds scale * F(eps(a - cg t), tau) e^{i h (k0 a - w0 t)} (+ c.c.), or its time derivative
void embed(SpectralField& out, const WavePacket& p, const BandSpec& s, double t, bool derivative) {
    const std::size_t n = s.hat->size();
    const double eps = p.eps, cg = p.params.cg, w0 = p.params.omega0;
    const double dK = 2.0 * M_PI / s.slow_length;
    for (std::size_t i = 0; i < n; ++i) {
        const long j = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
        if (j == -static_cast<long>(n / 2)) continue;
        const cplx F = (*s.hat)[i];
        const cplx Ft = derivative ? (*s.hat_tau)[i] : cplx(0.0);
        if (F == 0.0 && Ft == 0.0) continue;
        const double K = dK * static_cast<double>(j);
        const double rate = eps * K * cg + s.harmonic * w0;
        const cplx phase = std::exp(cplx(0.0, -rate * t));
        cplx c = derivative ? (cplx(0.0, -rate) * F + eps * eps * Ft) : F;
        c *= s.scale * phase;
        const long mode = s.harmonic * p.N0 + j;
        out.coeffs[out.grid.index_of(mode)] += c;
        if (s.add_conj) out.coeffs[out.grid.index_of(-mode)] += std::conj(c);
    }
}

struct SlowSpectra {
    CVec A, A_tau;        // n_env modes
    CVec A2, A2_tau;      // 2 n_env modes
    CVec M, M_tau;
};

SlowSpectra slow_spectra(const WavePacket& p, bool derivative) {
    SlowSpectra s;
    s.A = envelope_hat(p, p.A.A);
    if (derivative) {
        s.A_tau = envelope_hat(p, nls_rhs(p.A, p.nls));
    }
    if (!p.corrections) return s;
    const CVec a = refine(s.A);
    CVec a2(a.size()), m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a2[i] = a[i] * a[i];
        m[i] = std::norm(a[i]);
    }
    detail::fft_forward(a2, s.A2);
    detail::fft_forward(m, s.M);
    if (derivative) {
        const CVec at = refine(s.A_tau);
        CVec a2t(a.size()), mt(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a2t[i] = 2.0 * a[i] * at[i];
            mt[i] = 2.0 * (std::conj(a[i]) * at[i]).real();
        }
        detail::fft_forward(a2t, s.A2_tau);
        detail::fft_forward(mt, s.M_tau);
    }
    return s;
}

void first_block(FieldSet& u, const WavePacket& p, const SlowSpectra& s, double t, bool derivative) {
    const double eps = p.eps;
    embed(u[m1], p, {&s.A, &s.A_tau, p.L_xi, 1, eps, true}, t, derivative);
    if (!p.corrections) return;
    const int comps[2] = {m1, p1};
    for (int i = 0; i < 2; ++i) {
        embed(u[comps[i]], p, {&s.A2, &s.A2_tau, p.L_xi, 2, eps * eps * p.nls.second_harmonic[i], true}, t,
              derivative);
        embed(u[comps[i]], p, {&s.M, &s.M_tau, p.L_xi, 0, eps * eps * p.nls.mean_flow[i].real(), false}, t,
              derivative);
    }
}

void make_real(FieldSet& u) {
    for (int c = 0; c < 4; ++c) hermitian_symmetrize(u[c]);
}

// N(v, w) = d( K0 v * sigma^{-1} d^2 w )
SpectralField consistency_product(const SpectralField& v, const SpectralField& w, double b) {
    const Multiplier k0 = tabulate(v.grid, [](double k) { return k0_symbol(k); });
    const Multiplier si = tabulate_real(v.grid, [b](double k) { return sigma_inv(k, b); });
    return derivative(product(apply_multiplier(k0, v), apply_multiplier(si, derivative(w, 2))));
}

}  // namespace

WavePacket make_packet(const PacketConfig& cfg, const NLSCoeffs& nls) {
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw std::invalid_argument("packet: eps must lie in (0,1)");
    if (!(cfg.L_xi > 0.0)) throw std::invalid_argument("packet: L_xi must be positive");
    WavePacket p{cfg.eps, ModelParams(cfg.k0, cfg.b), nls, EnvelopeField{Grid1D(cfg.n_env, cfg.L_xi), {}, 0.0},
                 Grid1D(8, 1.0)};
    p.N0 = std::lround(cfg.k0 * cfg.L_xi / (2.0 * M_PI * cfg.eps));
    const long n_env = static_cast<long>(cfg.n_env);
    if (p.N0 < (3 * n_env) / 2 + 2)
        throw std::invalid_argument("grid nesting violation: carrier mode " + std::to_string(p.N0) +
                                    " too small for " + std::to_string(n_env) +
                                    " envelope modes; increase L_xi or decrease eps");
    const double L = 2.0 * M_PI * static_cast<double>(p.N0) / cfg.k0;
    p.L_xi = cfg.eps * L;
    std::size_t n = cfg.n_carrier;
    const long need = 4 * p.N0 + 2 * n_env + 2;
    if (n == 0) n = next_smooth(static_cast<std::size_t>(3 * need + 3));
    if (static_cast<long>(n / 3) < 2 * p.N0 + n_env)
        throw std::invalid_argument("grid nesting violation: carrier grid of " + std::to_string(n) +
                                    " points cannot hold the second harmonic band");
    p.carrier = Grid1D(n, L);
    p.A = EnvelopeField{Grid1D(cfg.n_env, p.L_xi), CVec(cfg.n_env, 0.0), 0.0};
    p.corrections = cfg.corrections;
    return p;
}

void set_envelope(WavePacket& p, const std::function<cplx(double)>& fn) {
    for (std::size_t i = 0; i < p.A.grid.size(); ++i) p.A.A[i] = fn(p.A.grid.position(i));
}

void set_sech_envelope(WavePacket& p, double amplitude, double width) {
    const double c = 0.5 * p.L_xi;
    set_envelope(p, [=](double xi) { return cplx(amplitude / std::cosh((xi - c) / width), 0.0); });
}

SecondOrderAmplitudes second_order_corrections(const EnvelopeField& A, const NLSCoeffs& c) {
    SecondOrderAmplitudes s;
    for (int i = 0; i < 2; ++i) {
        s.A_m2[i].resize(A.A.size());
        s.A_m0[i].resize(A.A.size());
        for (std::size_t k = 0; k < A.A.size(); ++k) {
            s.A_m2[i][k] = c.second_harmonic[i] * A.A[k] * A.A[k];
            s.A_m0[i][k] = c.mean_flow[i] * std::norm(A.A[k]);
        }
    }
    return s;
}

void fill_second_block(FieldSet& u, double b, bool with_quadratic) {
    u[m2] = derivative(u[m1], 2);
    u[p2] = derivative(u[p1], 2);
    if (!with_quadratic) return;
    const SpectralField N = consistency_product(u[m1] + u[p1], u[m1] - u[p1], b);
    u[m2] -= 0.5 * N;
    u[p2] -= 0.5 * N;
}

FieldSet build(const WavePacket& p, double t) {
    FieldSet u(p.carrier);
    const SlowSpectra s = slow_spectra(p, false);
    first_block(u, p, s, t, false);
    make_real(u);
    fill_second_block(u, p.params.b, p.corrections);
    make_real(u);
    return u;
}

FieldSet build_leading(const WavePacket& p, double t) {
    WavePacket q = p;
    q.corrections = false;
    return build(q, t);
}

FieldSet build_time_derivative(const WavePacket& p, double t) {
    FieldSet du(p.carrier);
    const SlowSpectra s = slow_spectra(p, true);
    first_block(du, p, s, t, true);
    make_real(du);
    fill_second_block(du, p.params.b, false);
    if (p.corrections) {
        FieldSet u(p.carrier);
        first_block(u, p, s, t, false);
        make_real(u);
        const double b = p.params.b;
        const SpectralField Nd = consistency_product(du[m1] + du[p1], u[m1] - u[p1], b) +
                                 consistency_product(u[m1] + u[p1], du[m1] - du[p1], b);
        du[m2] -= 0.5 * Nd;
        du[p2] -= 0.5 * Nd;
    }
    make_real(du);
    return du;
}

WavePacket fourier_truncate(const WavePacket& p, double delta0) {
    if (!(delta0 > 0.0 && delta0 < p.params.k0 / 20.0))
        throw std::invalid_argument("fourier_truncate: delta0 must lie in (0, k0/20)");
    WavePacket q = p;
    q.truncated = true;
    q.delta0 = delta0;
    return q;
}

}  // namespace capwave
