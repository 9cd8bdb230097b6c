#include "capwave/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "capwave/dispersion.hpp"

namespace capwave {

void validate(const SimConfig& cfg) {
    auto bad = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("invalid " + field + ": " + why);
    };
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) bad("dt", "must be positive");
    if (!(cfg.t_end >= 0.0)) bad("t_end", "must be nonnegative");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) bad("eps", "must lie in (0,1)");
    if (!(cfg.k0 > 0.0)) bad("k0", "must be positive");
    if (!(cfg.b >= 0.0)) bad("b", "must be nonnegative");
    if (cfg.n < 8 || cfg.n % 2 != 0) bad("n", "must be even and >= 8");
    if (cfg.L < 0.0) bad("L", "must be nonnegative");
    if (cfg.L > 0.0) {
        const double N0 = cfg.k0 * cfg.L / (2.0 * M_PI);
        if (std::abs(N0 - std::round(N0)) > 1e-9) bad("L", "k0 must be a grid wavenumber");
    }
}

Simulator::Simulator(const Grid1D& grid, double b, Exec exec, bool linear_only)
    : model_(grid, b, exec), linear_only_(linear_only) {}

FieldSet Simulator::nonlinear(const FieldSet& u) const {
    if (linear_only_) return FieldSet(u.grid());
    return model_.nonlinearity(u);
}

void Simulator::phase(FieldSet& u, double h) const {
    for (int c = 0; c < 4; ++c) {
        const CVec& lam = model_.linear_symbol(c);
        CVec& x = u[c].coeffs;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= std::exp(lam[i] * h);
    }
}

void Simulator::step(SimState& s, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double h2 = 0.5 * dt;
    const FieldSet& u = s.u;

    const FieldSet k1 = nonlinear(u);
    FieldSet a = u;
    axpy(a, h2, k1);
    phase(a, h2);
    const FieldSet k2 = nonlinear(a);  // at t + dt/2
    FieldSet b = u;
    phase(b, h2);
    axpy(b, h2, k2);
    const FieldSet k3 = nonlinear(b);
    FieldSet c = u;
    phase(c, h2);
    axpy(c, dt, k3);
    phase(c, h2);
    const FieldSet k4 = nonlinear(c);

    // u_{n+1} = E u + dt/6 (E k1 + 2 E^{1/2} k2 + 2 E^{1/2} k3) + dt/6 k4, E = e^{L dt}
    FieldSet first = u;
    axpy(first, dt / 6.0, k1);
    phase(first, h2);
    axpy(first, dt / 3.0, k2);
    axpy(first, dt / 3.0, k3);
    phase(first, h2);
    axpy(first, dt / 6.0, k4);

    s.u = std::move(first);
    s.t += dt;
    ++s.step;
    for (int comp = 0; comp < 4; ++comp)
        for (const cplx& z : s.u[comp].coeffs)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::runtime_error("simulation: non-finite state at step " + std::to_string(s.step) +
                                         " (t = " + std::to_string(s.t) + ")");
}

void Simulator::run(SimState& s, double dt, double t_end, const Observer& obs, long stride) const {
    if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    const double span = t_end - s.t;
    if (span <= 0.0) return;
    const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    for (long i = 1; i <= steps; ++i) {
        step(s, h);
        if (obs && ((stride > 0 && i % stride == 0) || i == steps)) obs(s);
    }
}

double reality_defect(const FieldSet& u) {
    double m = 0.0;
    for (int c = 0; c < 4; ++c) {
        const CVec x = to_physical(u[c]);
        for (const cplx& z : x) m = std::max(m, std::abs(z.imag()));
    }
    return m;
}

ResidualNorms residual(const TruncatedModel& model, const WavePacket& p, double t) {
    require_same_grid(model.grid(), p.carrier, "residual");
    const FieldSet u = build(p, t);
    const FieldSet du = build_time_derivative(p, t);
    const FieldSet res = model.rhs(u) - du;
    ResidualNorms r;
    double s = 0.0;
    for (int c = 0; c < 4; ++c) {
        r.comp[c] = l2_norm(res[c]);
        s += r.comp[c] * r.comp[c];
    }
    r.total = std::sqrt(s);
    return r;
}

double fit_order(const std::vector<double>& eps, const std::vector<double>& values) {
    if (eps.size() != values.size() || eps.size() < 2) throw std::invalid_argument("fit_order: need two or more points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && values[i] > 0.0)) throw std::invalid_argument("fit_order: values must be positive");
        mx += std::log(eps[i]) / n;
        my += std::log(values[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double dx = std::log(eps[i]) - mx;
        sxy += dx * (std::log(values[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

OrderFit residual_scan(const ResidualScanConfig& cfg, Exec exec) {
    const NLSCoeffs nls = nls_coefficients(cfg.k0, cfg.b);
    OrderFit fit;
    for (double eps : cfg.eps) {
        PacketConfig pc;
        pc.eps = eps;
        pc.k0 = cfg.k0;
        pc.b = cfg.b;
        pc.L_xi = cfg.L_xi;
        pc.n_env = cfg.n_env;
        pc.corrections = cfg.corrections;
        WavePacket p = make_packet(pc, nls);
        set_sech_envelope(p, cfg.amplitude, cfg.width);
        const TruncatedModel model(p.carrier, cfg.b, exec);
        fit.eps.push_back(eps);
        fit.values.push_back(residual(model, p, 0.0).total);
    }
    fit.order = fit_order(fit.eps, fit.values);
    return fit;
}

double split_norm(const FieldSet& u) {
    const double a = l2_norm(u[m1]), b = l2_norm(u[p1]);
    const double c = sobolev_norm(u[m2], 2.0), d = sobolev_norm(u[p2], 2.0);
    return std::sqrt(a * a + b * b + c * c + d * d);
}

ErrorScanResult error_scan(const ErrorScanConfig& cfg) {
    if (cfg.eps.size() < 2) throw std::invalid_argument("error_scan: need two or more eps values");
    if (!(cfg.tau0 > 0.0)) throw std::invalid_argument("error_scan: tau0 must be positive");
    if (cfg.samples < 1) throw std::invalid_argument("error_scan: samples must be positive");
    const NLSCoeffs nls = nls_coefficients(cfg.k0, cfg.b);
    ErrorScanResult out;
    out.nu = nls.nu;
    std::vector<double> eps_sorted = cfg.eps;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    for (double eps : eps_sorted) {
        PacketConfig pc;
        pc.eps = eps;
        pc.k0 = cfg.k0;
        pc.b = cfg.b;
        pc.L_xi = cfg.L_xi;
        pc.n_env = cfg.n_env;
        WavePacket p = make_packet(pc, nls);
        set_sech_envelope(p, cfg.amplitude, cfg.width);
        const EnvelopeField A0 = p.A;

        ErrorScanRow row;
        row.eps = eps;
        row.t_end = cfg.horizon == Horizon::tau0_over_eps2 ? cfg.tau0 / (eps * eps) : cfg.tau0 / eps;
        const Simulator sim(p.carrier, cfg.b, cfg.exec);
        SimState s(build(p, 0.0), 0.0);
        row.size = split_norm(s.u);
        const double dt = cfg.dt > 0.0 ? cfg.dt : 0.05;
        const double dtau = 1e-3;

        EnvelopeField A = A0;
        for (int i = 1; i <= cfg.samples; ++i) {
            const double t = row.t_end * i / cfg.samples;
            try {
                sim.run(s, dt, t);
            } catch (const std::runtime_error&) {
                row.flagged = true;
                row.blew_up = true;
                row.error = std::numeric_limits<double>::infinity();
                break;
            }
            row.steps = s.step;
            const double tau = eps * eps * t;
            A = nls_evolve(A, nls, dtau, tau - A.tau);
            A.tau = tau;
            p.A = A;
            const double e = split_norm(s.u - build(p, t));
            row.times.push_back(t);
            row.errors.push_back(e);
            row.error = std::max(row.error, e);
            if (e > row.size) row.flagged = true;
        }
        out.rows.push_back(row);
    }
    std::vector<double> e, v;
    for (const auto& r : out.rows) {
        e.push_back(r.eps);
        v.push_back(r.error);
        if (r.blew_up) out.order = std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) out.monotone = false;
    if (!std::isnan(out.order)) out.order = fit_order(e, v);
    return out;
}

ConsistencyDefect consistency_residual(const FieldSet& u, double b) {
    const Grid1D& g = u.grid();
    const Multiplier si = tabulate_real(g, [b](double k) { return sigma_inv(k, b); });
    const Multiplier k0 = tabulate(g, [](double k) { return k0_symbol(k); });
    const SpectralField d2 = u[m2] - u[p2];
    const SpectralField d1 = u[m1] - u[p1];
    const SpectralField v = u[m1] + u[p1];
    ConsistencyDefect c;
    c.first = l2_norm(antiderivative(apply_multiplier(si, d2)) - apply_multiplier(si, derivative(d1)));
    SpectralField rel = antiderivative2(u[m2] + u[p2]) - v +
                        antiderivative(product(apply_multiplier(k0, v), apply_multiplier(si, d2)));
    rel[0] = 0.0;  // both sides of the relation are fixed only up to their mean
    c.second = l2_norm(rel);
    return c;
}

EnergyDiagnostic energy_diagnostic(const FieldSet& u, const WavePacket& p, double t, int l,
                                   const KernelParams& kp) {
    if (l < 0) throw std::invalid_argument("energy_diagnostic: l must be nonnegative");
    const Grid1D& g = u.grid();
    require_same_grid(g, p.carrier, "energy_diagnostic");
    const double eps = p.eps;
    FieldSet R = u - build(p, t);
    R = std::pow(eps, -2.5) * R;

    // the eps^1 band of the carrier split into its e^{+i k0 a} and e^{-i k0 a} parts, divided by eps
    const FieldSet lead = build_leading(p, t);
    SpectralField psi_plus(g, false), psi_minus(g, false);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const long mode = g.mode_of(i);
        if (mode > 0) psi_plus[i] = lead[m1][i] / eps;
        if (mode < 0) psi_minus[i] = lead[m1][i] / eps;
    }

    auto deriv_l = [l](const SpectralField& f) { return l == 0 ? f : derivative(f, l); };
    EnergyDiagnostic d;
    d.l = l;
    const int js[4] = {-1, 1, -2, 2};
    for (int a = 0; a < 4; ++a) {
        const int j1 = js[a];
        const int c1 = comp_from_index(j1);
        const SpectralField dR = deriv_l(R[c1]);
        const Multiplier rho = tabulate_real(g, [&](double k) { return rho_hat(j1, l, k, kp); });
        const SpectralField wdR = apply_multiplier(rho, dR);
        double plain = 0.0, weighted = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            plain += std::norm(dR[i]);
            weighted += (std::conj(dR[i]) * wdR[i]).real();
        }
        d.plain += 0.5 * plain * g.length();
        d.value += 0.5 * weighted * g.length();

        // N_{j1}(psi, R)(k) = sum over j2, ell of n_hat(k) (psi_ell R_{j2})^(k), with |j2| = |j1|
        SpectralField N(g, false);
        for (int j2 : {-std::abs(j1), std::abs(j1)}) {
            const int c2 = comp_from_index(j2);
            for (int ell : {-1, 1}) {
                SpectralField prod = product(ell > 0 ? psi_plus : psi_minus, R[c2]);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    if (prod[i] == 0.0) continue;
                    prod[i] *= n_hat(j1, j2, ell, 1, g.wavenumber(i), kp);
                }
                N += prod;
            }
        }
        const SpectralField wdN = apply_multiplier(rho, deriv_l(N));
        double corr = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) corr += (std::conj(dR[i]) * wdN[i]).real();
        d.correction += eps * corr * g.length();
    }
    d.value += d.correction;
    return d;
}

}  // namespace capwave
