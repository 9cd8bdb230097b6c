#include "capwave/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "capwave/dispersion.hpp"
#include "capwave/resonance.hpp"

namespace capwave {

namespace {

constexpr cplx I(0.0, 1.0);

double sgn(int j) { return j < 0 ? -1.0 : 1.0; }

void require_pair(int j1, int j2) {
    const int a1 = std::abs(j1), a2 = std::abs(j2);
    if ((a1 != 1 && a1 != 2) || a1 != a2)
        throw std::invalid_argument("kernel indices must satisfy j1, j2 in {-2,-1,1,2} with |j1| = |j2|");
}

// Fourier amplitudes of the auxiliary fields built from one unit mode e^{il a} in component c
struct Feed {
    cplx v, y, D, kap, P, Q, Y, um2, up2, skap;
};

Feed feed(int c, double l, double b) {
    Feed f{};
    const double si = sigma_inv(l, b);
    if (c == m1 || c == p1) {
        f.v = 1.0;
        f.y = (c == m1 ? 1.0 : -1.0) * si;
        return f;
    }
    const double s = c == m2 ? 1.0 : -1.0;
    f.D = 1.0;
    f.kap = s * si;
    f.skap = s;
    f.um2 = c == m2 ? 1.0 : 0.0;
    f.up2 = c == p2 ? 1.0 : 0.0;
    if (l != 0.0) {
        f.P = -f.D / (l * l);
        f.Q = f.D / (I * l);
        f.Y = f.kap / (I * l);
    }
    return f;
}

// which (term, slot) pairs enter the linearization about the packet; psi_first means the packet
// fills the first factor and R the second
bool slot_included(int j1, int id, bool psi_first) {
    if (std::abs(j1) == 1) return true;
    using T = TermFields;
    if (psi_first) return id == T::B1m || id == T::B1p || id == T::B2 || id == T::B3 || id == T::B4;
    return id == T::B4 || id == T::B2;
}

double smooth_step(double t) {
    // 0 for t <= 0, 1 for t >= 1, C-infinity in between
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), c = std::exp(-1.0 / (1.0 - t));
    return a / (a + c);
}

}  // namespace

double theta_hat(double k, double eps, double delta0) {
    const double a = std::abs(k);
    return a > delta0 ? 1.0 : eps + (1.0 - eps) * a / delta0;
}

double theta_inv_hat(double k, double eps, double delta0) { return 1.0 / theta_hat(k, eps, delta0); }

double xi_hat(double k, double delta) {
    const double a = std::abs(k);
    return 1.0 - smooth_step((a - 0.5 * delta) / (0.5 * delta));
}

double select_delta0(double k0, double b) {
    const ModelParams p(k0, b);
    const double slope = std::min(std::abs(1.0 - p.cg), 1.0 + p.cg);
    if (slope < 1e-8)
        throw std::domain_error("select_delta0: group velocity equals the long-wave speed; no admissible delta0");
    const double gamma = 0.1 * slope;
    const int ns = 41;
    for (int j = 1; j <= 80; ++j) {
        const double d = k0 / 20.0 * std::pow(0.9, j);
        bool ok = true;
        for (int ell : {-1, 1}) {
            const double l0 = ell * k0;
            for (int i = 0; i < ns && ok; ++i) {
                const double x = -d + 2.0 * d * i / (ns - 1);
                if (std::abs(x) < 1e-3 * d) continue;
                for (int j1 : {-1, 1}) {
                    if (std::abs(r_general(j1, -1, x, l0, x - l0, b)) < gamma * std::abs(x)) ok = false;
                    for (int s = 0; s < 21 && ok; ++s) {
                        const double l = l0 - d + 2.0 * d * s / 20.0;
                        if (std::abs(r_general(j1, -1, x, l, x - l, b)) < gamma * std::abs(x)) ok = false;
                    }
                }
                for (int j2 : {-1, 1})
                    if (std::abs(r_general(-1, j2, l0 + x, l0, x, b)) < gamma * std::abs(x)) ok = false;
            }
        }
        if (ok) return d;
    }
    throw std::domain_error("select_delta0: resonance lower bounds fail for every candidate delta0");
}

KernelParams make_kernel_params(double k0, double b, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("kernel params: eps must lie in (0,1)");
    KernelParams p;
    p.k0 = k0;
    p.b = b;
    p.eps = eps;
    p.delta0 = select_delta0(k0, b);
    const CriticalBonds& cb = critical_bonds_cached(k0);
    p.b0 = cb.b0;
    p.b1 = cb.b1;
    if (b > 0.0 && b < cb.b0) {
        p.k1 = k1_of_b(k0, b);
        const double bound = 1.0 - k0 / (20.0 * (*p.k1 - k0));
        if (!(bound > 0.0)) throw std::domain_error("kernel params: k1 too close to k0 for an admissible delta1");
        p.delta1 = std::min(0.5, 0.5 * bound);
    }
    return p;
}

cplx term_symbol(int id, int compU, int compV, double l, double m, double b) {
    using T = TermFields;
    const Feed u = feed(compU, l, b), v = feed(compV, m, b);
    const double k = l + m;
    const cplx ik = I * k;
    const cplx K0k = k0_symbol(k), K0l = k0_symbol(l), K0m = k0_symbol(m);
    const double sk = sigma(k, b);
    const double th = std::tanh(k), sech2 = 1.0 - th * th;
    const cplx comm = sk * K0k * (K0k - K0m);  // sigma K0 [K0, g] f, g at l and f at m
    switch (id) {
        case T::A1: return ik * u.v * v.v;
        case T::A2: return ik * K0l * K0m * u.v * v.v;
        case T::A3: return ik * comm * u.y * v.v;
        case T::A4: return ik * sk * sech2 * u.y * v.v;
        case T::B1m: return ik * u.P * v.um2;
        case T::B1p: return ik * u.P * v.up2;
        case T::B2: return ik * (sk - sigma(m, b)) * u.P * v.kap;
        case T::B3: return ik * K0l * u.Y * v.kap;
        case T::B4: return ik * u.kap * K0m * (I * m) * v.kap;
        case T::B5: return ik * u.Q * v.Q;
        case T::B6: return ik * K0l * u.Q * K0m * v.Q;
        case T::B7: return ik * ik * comm * u.y * v.Q;
        case T::B8: return ik * ik * sk * sech2 * u.y * v.Q;
        case T::B9: return ik * comm * u.Y * v.Q;
        case T::B10: return ik * sk * sech2 * u.Y * v.Q;
        default: throw std::invalid_argument("term_symbol: unknown term id");
    }
}

cplx ordered_symbol(int eq, int compU, int compV, double l, double m, double b) {
    cplx s = 0.0;
    for (int id = 0; id < TermFields::count; ++id) {
        const double w = term_weight(eq, id, b);
        if (w != 0.0) s += w * term_symbol(id, compU, compV, l, m, b);
    }
    return s;
}

cplx polarized_symbol(int eq, int compU, int compV, double l, double m, double b) {
    return ordered_symbol(eq, compU, compV, l, m, b) + ordered_symbol(eq, compV, compU, m, l, b);
}

cplx q_total(int j1, int j2, double k, double m, double b) {
    require_pair(j1, j2);
    const int eq = comp_from_index(j1), cr = comp_from_index(j2);
    const double l = k - m;
    cplx s = 0.0;
    for (int id = 0; id < TermFields::count; ++id) {
        const double w = term_weight(eq, id, b);
        if (w == 0.0) continue;
        // packet: unit mode in u_-1 and its second derivative -l^2 in u_-2
        if (slot_included(j1, id, true))
            s += w * (term_symbol(id, m1, cr, l, m, b) - l * l * term_symbol(id, m2, cr, l, m, b));
        if (slot_included(j1, id, false))
            s += w * (term_symbol(id, cr, m1, m, l, b) - l * l * term_symbol(id, cr, m2, m, l, b));
    }
    return s;
}

cplx q_symbol(int j1, int j2, int mu, double k, double m, double b) {
    require_pair(j1, j2);
    const double l = k - m;
    const cplx ik = I * k;
    const bool same = j1 == j2;
    if (std::abs(j1) == 1) {
        switch (mu) {
            case 1: return same ? -ik : cplx(0.0);
            case 2: return same ? cplx(0.0) : ik * k0_symbol(l) * k0_symbol(m);
            case 3: return q_total(j1, j2, k, m, b) - q_symbol(j1, j2, 1, k, m, b) - q_symbol(j1, j2, 2, k, m, b);
            default: throw std::invalid_argument("q_symbol: mu must be 1, 2 or 3 when |j1| = 1");
        }
    }
    switch (mu) {
        case 1: return same ? -ik : cplx(0.0);
        case 2: return -0.5 * sgn(j2) * ik * k0_symbol(l) * sigma_inv(l, b) * (I * l) * sigma_inv(m, b);
        case 3:
            return -0.5 * b * sgn(j2) * ik * sigma_inv(l, b) * (l * l) * k0_symbol(m) * sigma_inv(m, b) * (I * m);
        case 4:
            if (m == 0.0) throw std::domain_error("q_symbol: q^{2,4} is singular at m = 0");
            return 0.5 * sgn(j1) * ik * (sigma(k, b) - sigma(l, b)) * sigma_inv(l, b) * (l * l) / (m * m);
        case 5: {
            cplx s = q_total(j1, j2, k, m, b);
            for (int nu = 1; nu <= 4; ++nu) s -= q_symbol(j1, j2, nu, k, m, b);
            return s;
        }
        default: throw std::invalid_argument("q_symbol: mu must be between 1 and 5 when |j1| = 2");
    }
}

cplx frak_q(int j, int j1, int j2, double k, double m, double b) {
    require_pair(j1, j2);
    if (j == 1) {
        cplx s = q_total(j1, j2, k, m, b);
        if (std::abs(j1) == 2) s -= q_symbol(j1, j2, 4, k, m, b);
        return s;
    }
    if (j == 2 && std::abs(j1) == 2) return I * m * q_symbol(j1, j2, 4, k, m, b);
    throw std::invalid_argument("frak_q: j must be 1, or 2 when |j1| = 2");
}

double zeta_hat(int j1, int j2, int ell, double k, const KernelParams& p) {
    if (!p.k1 || j1 > 0 || j2 > 0) return 1.0;
    const double w = *p.k1 - p.k0;
    return 1.0 - xi_hat((k - ell * *p.k1) / w, p.delta1) - xi_hat((k + ell * w) / w, p.delta1);
}

double rho_hat(int j1, int l, double k, const KernelParams& p) {
    if (!p.k1 || j1 > 0) return 1.0;
    if (l < 0) throw std::invalid_argument("rho_hat: derivative count must be nonnegative");
    const double w = *p.k1 - p.k0;
    double r = 1.0;
    for (int ell : {-1, 1}) {
        const double win = xi_hat((k + ell * w) / w, p.delta1);
        if (win == 0.0) continue;
        const double lk = ell * p.k0;
        const cplx num = -q_total(j1, j1, -k + lk, -k, p.b);
        const cplx den = q_total(j1, j1, k, k - lk, p.b);
        if (std::abs(den) == 0.0) throw std::runtime_error("rho_hat: vanishing kernel in the weight ratio");
        const double ratio = (num / den).real() * std::pow((-k + lk) / k, 2 * l);
        r += (ratio - 1.0) * win;
    }
    return r;
}

cplx n_hat(int j1, int j2, int ell, int j, double k, const KernelParams& p) {
    require_pair(j1, j2);
    if (ell != 1 && ell != -1) throw std::invalid_argument("n_hat: ell must be +-1");
    const double lk = ell * p.k0;
    const double m = k - lk;
    if (std::abs(m) < 1e-12 * p.k0) return 0.0;  // theta - eps xi0 vanishes at k = ell k0
    const double weight = zeta_hat(j1, j2, ell, k, p) *
                          (theta_hat(m, p.eps, p.delta0) - p.eps * xi_hat(m, p.delta0)) /
                          theta_hat(k, p.eps, p.delta0);
    if (weight == 0.0) return 0.0;
    auto raw = [&](double kk) { return frak_q(j, j1, j2, kk, kk - lk, p.b) / r_general(j1, j2, kk, lk, kk - lk, p.b); };
    if (std::abs(k) < 1e-6 && j2 < 0) {
        const double h = 1e-5;
        return 0.5 * (raw(h) + raw(-h)) * weight;
    }
    const cplx r = r_general(j1, j2, k, lk, m, p.b);
    if (std::abs(r) < 1e-12)
        throw std::runtime_error("n_hat: non-removable resonance at k = " + std::to_string(k) +
                                 "; parameters outside the admissible set");
    return frak_q(j, j1, j2, k, m, p.b) / r * weight;
}

cplx extract_kernel(const BilinearOp& op, const Grid1D& grid, long l_mode, long m_mode) {
    const long lim = grid.dealias_limit();
    if (std::abs(l_mode) > lim || std::abs(m_mode) > lim || std::abs(l_mode + m_mode) > lim)
        throw std::invalid_argument("extract_kernel: modes " + std::to_string(l_mode) + ", " +
                                    std::to_string(m_mode) + " alias on a grid of " + std::to_string(grid.size()) +
                                    " points");
    const SpectralField out = op(grid_mode(grid, l_mode), grid_mode(grid, m_mode));
    return out.at_mode(l_mode + m_mode);
}

BilinearOp model_component_op(const TruncatedModel& model, int eq, int compU, int compV) {
    return [&model, eq, compU, compV](const SpectralField& f, const SpectralField& g) {
        FieldSet U(model.grid()), V(model.grid());
        U[compU] = f;
        V[compV] = g;
        return model.bilinear(U, V)[eq];
    };
}

namespace {

struct LinearizedTerms {
    TermFields psi_first, r_first;
};

LinearizedTerms linearized_terms(const TruncatedModel& model, int j2, long l_mode, long m_mode) {
    const Grid1D& g = model.grid();
    const long lim = g.dealias_limit();
    if (std::abs(l_mode) > lim || std::abs(m_mode) > lim || std::abs(l_mode + m_mode) > lim)
        throw std::invalid_argument("linearized extraction: modes alias on this grid");
    const double l = g.fundamental() * static_cast<double>(l_mode);
    FieldSet psi(g), R(g);
    psi[m1] = grid_mode(g, l_mode);
    psi[m2] = grid_mode(g, l_mode, -l * l);
    R[comp_from_index(j2)] = grid_mode(g, m_mode);
    return {model.terms(psi, R), model.terms(R, psi)};
}

}  // namespace

cplx extract_q_total(const TruncatedModel& model, int j1, int j2, long l_mode, long m_mode) {
    require_pair(j1, j2);
    const LinearizedTerms lt = linearized_terms(model, j2, l_mode, m_mode);
    const int eq = comp_from_index(j1);
    const long k_mode = l_mode + m_mode;
    cplx s = 0.0;
    for (int id = 0; id < TermFields::count; ++id) {
        const double w = term_weight(eq, id, model.bond());
        if (w == 0.0) continue;
        if (slot_included(j1, id, true)) s += w * lt.psi_first.t[static_cast<std::size_t>(id)].at_mode(k_mode);
        if (slot_included(j1, id, false)) s += w * lt.r_first.t[static_cast<std::size_t>(id)].at_mode(k_mode);
    }
    return s;
}

cplx extract_q_part(const TruncatedModel& model, int j1, int j2, int mu, long l_mode, long m_mode) {
    require_pair(j1, j2);
    if (std::abs(j1) != 2 || mu < 1 || mu > 4)
        throw std::invalid_argument("extract_q_part: closed-form parts exist for |j1| = 2 and mu = 1..4");
    const LinearizedTerms lt = linearized_terms(model, j2, l_mode, m_mode);
    const int eq = comp_from_index(j1);
    const long k_mode = l_mode + m_mode;
    using T = TermFields;
    auto part = [&](const TermFields& tf, int id) {
        return term_weight(eq, id, model.bond()) * tf.t[static_cast<std::size_t>(id)].at_mode(k_mode);
    };
    switch (mu) {
        case 1: return part(lt.psi_first, j1 < 0 ? T::B1m : T::B1p);
        case 2: return part(lt.psi_first, T::B3);
        case 3: return part(lt.psi_first, T::B4);
        default: return part(lt.r_first, T::B2);
    }
}

}  // namespace capwave
