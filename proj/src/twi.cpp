#include "capwave/twi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capwave/dispersion.hpp"
#include "capwave/kernels.hpp"

namespace capwave {

cplx b11(double /*k*/, double l, double m, double b) { return polarized_symbol(m1, m1, m1, l, m, b); }

namespace {

void fill_triad_checks(TWICoeffs& c) {
    const double a = c.ell * c.k0, k1 = c.ell * c.k1;
    c.resonance_defect = std::abs(omega(-a, c.b) + omega(k1, c.b) + omega(-(k1 - a), c.b));
    if (c.resonance_defect > 1e-8 * std::max(1.0, std::abs(omega(k1, c.b))))
        c.warning = "triad is not resonant: omega sum = " + std::to_string(c.resonance_defect);
}

}  // namespace

TWICoeffs twi_coeffs(double k0, double k1, int ell, double b) {
    if (ell != 1 && ell != -1) throw std::invalid_argument("twi_coeffs: ell must be +-1");
    TWICoeffs c;
    c.k0 = k0;
    c.k1 = k1;
    c.k1_used = k1;
    c.b = b;
    c.ell = ell;
    const double a = ell * k0, e = ell * k1;
    c.c0 = b11(-a, -e, e - a, b);
    c.c1 = b11(e, a, e - a, b);
    c.c2 = b11(-e + a, a, -e, b);
    fill_triad_checks(c);
    return c;
}

TWICoeffs twi_coeffs_extracted(double k0, double k1, int ell, double b, long j0) {
    if (ell != 1 && ell != -1) throw std::invalid_argument("twi_coeffs: ell must be +-1");
    if (j0 < 1) throw std::invalid_argument("twi_coeffs_extracted: j0 must be positive");
    const double L = 2.0 * M_PI * static_cast<double>(j0) / k0;
    const long n1 = std::lround(k1 * L / (2.0 * M_PI));
    std::size_t n = 64;
    while (static_cast<long>(n) / 3 < 2 * std::max(n1, j0) + 2) n *= 2;
    const Grid1D grid(n, L);
    const TruncatedModel model(grid, b);
    const BilinearOp op = model_component_op(model, m1, m1, m1);
    auto pol = [&](long l, long m) { return extract_kernel(op, grid, l, m) + extract_kernel(op, grid, m, l); };

    TWICoeffs c;
    c.k0 = k0;
    c.k1 = k1;
    c.k1_used = static_cast<double>(n1) * grid.fundamental();
    c.b = b;
    c.ell = ell;
    const long a = ell * j0, e = ell * n1;
    c.c0 = pol(-e, e - a);
    c.c1 = pol(a, e - a);
    c.c2 = pol(a, -e);
    fill_triad_checks(c);
    if (std::abs(c.k1_used - k1) > 1e-12 * std::max(1.0, k1))
        c.warning += (c.warning.empty() ? "" : "; ") + std::string("k1 rounded to grid wavenumber ") +
                     std::to_string(c.k1_used);
    return c;
}

TWIState twi_rhs(const TWIState& s, const TWICoeffs& c) {
    TWIState d;
    d.A0 = c.c0 * std::conj(s.A1 * s.A2);
    d.A1 = c.c1 * std::conj(s.A0 * s.A2);
    d.A2 = c.c2 * std::conj(s.A0 * s.A1);
    d.tau = 1.0;
    return d;
}

TWIState twi_step(const TWIState& s, const TWICoeffs& c, double dt) {
    auto add = [](const TWIState& x, const TWIState& k, double h) {
        TWIState r;
        r.A0 = x.A0 + h * k.A0;
        r.A1 = x.A1 + h * k.A1;
        r.A2 = x.A2 + h * k.A2;
        r.tau = x.tau + h;
        return r;
    };
    const TWIState k1 = twi_rhs(s, c);
    const TWIState k2 = twi_rhs(add(s, k1, 0.5 * dt), c);
    const TWIState k3 = twi_rhs(add(s, k2, 0.5 * dt), c);
    const TWIState k4 = twi_rhs(add(s, k3, dt), c);
    TWIState r;
    r.A0 = s.A0 + dt / 6.0 * (k1.A0 + 2.0 * k2.A0 + 2.0 * k3.A0 + k4.A0);
    r.A1 = s.A1 + dt / 6.0 * (k1.A1 + 2.0 * k2.A1 + 2.0 * k3.A1 + k4.A1);
    r.A2 = s.A2 + dt / 6.0 * (k1.A2 + 2.0 * k2.A2 + 2.0 * k3.A2 + k4.A2);
    r.tau = s.tau + dt;
    return r;
}

double conserved_E(const TWIState& s, const TWICoeffs& c) {
    if (std::abs(c.c2) == 0.0) throw std::domain_error("conserved_E: c2 = 0");
    const double ratio = (c.c1 / c.c2).real();
    return std::norm(s.A1) - ratio * std::norm(s.A2);
}

double default_dt(const TWIState& s, const TWICoeffs& c) {
    const double a = std::max({std::abs(s.A0), std::abs(s.A1), std::abs(s.A2), 1e-12});
    const double cm = std::max({std::abs(c.c0), std::abs(c.c1), std::abs(c.c2), 1e-12});
    return 1e-3 / (a * cm);
}

TWITrajectory integrate(const TWIState& s0, const TWICoeffs& c, double dt, double t_end, int stride) {
    if (!(dt > 0.0)) throw std::invalid_argument("twi integrate: dt must be positive");
    if (stride < 1) throw std::invalid_argument("twi integrate: stride must be positive");
    const long steps = std::lround(t_end / dt);
    TWITrajectory tr;
    TWIState s = s0;
    auto record = [&] { tr.samples.push_back({s.tau, s.A0, s.A1, s.A2, conserved_E(s, c)}); };
    record();
    for (long i = 1; i <= steps; ++i) {
        s = twi_step(s, c, dt);
        if (std::max({std::abs(s.A0), std::abs(s.A1), std::abs(s.A2)}) > 1e6 || !std::isfinite(std::abs(s.A0))) {
            tr.blew_up = true;
            record();
            break;
        }
        if (i % stride == 0 || i == steps) record();
    }
    return tr;
}

GrowthReport stability_experiment(const TWICoeffs& c, double t_end) {
    TWIState s{1.0, 1e-4, 1e-4, 0.0};
    const double dt = std::min(1e-3, default_dt(s, c));
    const TWITrajectory tr = integrate(s, c, dt, t_end, 10);
    GrowthReport g;
    const double a0 = std::abs(tr.samples.front().A1);
    double amax = a0;
    // fit over the window where the perturbation is still linear (|A1| below 1e-2)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : tr.samples) {
        const double a = std::abs(p.A1);
        amax = std::max(amax, a);
        if (a > 1e-2 || a == 0.0) break;
        const double y = std::log(a);
        sx += p.tau;
        sy += y;
        sxx += p.tau * p.tau;
        sxy += p.tau * y;
        ++n;
    }
    if (n >= 2) {
        const double den = n * sxx - sx * sx;
        if (den != 0.0) g.rate = (n * sxy - sx * sy) / den;
    }
    g.amplification = amax / a0;
    return g;
}

}  // namespace capwave
