#pragma once

#include <functional>
#include <optional>

#include "capwave/model.hpp"

namespace capwave {

struct KernelParams {
    double k0 = 2.0;
    double b = 0.0;
    double eps = 0.1;
    double delta0 = 0.0;
    double delta1 = 0.5;
    std::optional<double> k1;  // set when 0 < b < b0(k0)
    double b0 = 0.0;           // critical Bond numbers of k0, for reference
    double b1 = 0.0;
};

// delta0 chosen as k0/20 * 0.9^j with the smallest j for which the lower bounds of the
// resonance functions near k = 0 and k = +-k0 hold with slope margin 0.1
double select_delta0(double k0, double b);
KernelParams make_kernel_params(double k0, double b, double eps);

// 1 for |k| > delta0, eps + (1-eps)|k|/delta0 otherwise
double theta_hat(double k, double eps, double delta0);
double theta_inv_hat(double k, double eps, double delta0);
// even smooth cut-off: 1 on |k| <= delta/2, 0 on |k| >= delta
double xi_hat(double k, double delta);

// Analytic symbol of term `id` with the first factor e^{il a} placed in component compU and the
// second factor e^{im a} in component compV; value is the coefficient at k = l + m.
cplx term_symbol(int id, int compU, int compV, double l, double m, double b);
// sum of the weighted terms of equation `eq` (first factor U, second V)
cplx ordered_symbol(int eq, int compU, int compV, double l, double m, double b);
// coefficient of e^{i(l+m)a} in N(u) for u = e^{il a} e_U + e^{im a} e_V (per unit amplitudes)
cplx polarized_symbol(int eq, int compU, int compV, double l, double m, double b);

// Closed-form quadratic symbols q^{|j1|,mu}_{j1 j2}(k, k-m, m); j1, j2 in {-2,-1,1,2}, |j2| = |j1|.
// mu = 1..2 for |j1| = 1 and mu = 1..4 for |j1| = 2; mu = 3 (|j1|=1) and mu = 5 (|j1|=2) return the
// residual total - sum of closed forms.
cplx q_symbol(int j1, int j2, int mu, double k, double m, double b);
// symbol of the linearization of equation j1 about the carrier packet psi (at k - m, with its
// second-order block equal to d^2 psi) acting on R in component j2 at m
cplx q_total(int j1, int j2, double k, double m, double b);
// kernels entering n_hat: j = 1 is q_total (minus q^{2,4} when |j1| = 2), j = 2 is i m q^{2,4}
cplx frak_q(int j, int j1, int j2, double k, double m, double b);

double zeta_hat(int j1, int j2, int ell, double k, const KernelParams& p);
// rho^l_{j1}(k): 1 + sum over ell of the windowed ratio correction when 0 < b < b0 and j1 < 0
double rho_hat(int j1, int l, double k, const KernelParams& p);
cplx n_hat(int j1, int j2, int ell, int j, double k, const KernelParams& p);

using BilinearOp = std::function<SpectralField(const SpectralField&, const SpectralField&)>;
// coefficient of mode l+m of op(e^{il a}, e^{im a}); throws if any of l, m, l+m is aliased
cplx extract_kernel(const BilinearOp& op, const Grid1D& grid, long l_mode, long m_mode);
// one equation of the model as a bilinear map of one component of U and one of V
BilinearOp model_component_op(const TruncatedModel& model, int eq, int compU, int compV);

// Pseudo-spectral counterparts of q_total and of the term matched with each closed form.
cplx extract_q_total(const TruncatedModel& model, int j1, int j2, long l_mode, long m_mode);
cplx extract_q_part(const TruncatedModel& model, int j1, int j2, int mu, long l_mode, long m_mode);

}  // namespace capwave
