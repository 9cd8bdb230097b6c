#include "capwave/model.hpp"

#include <cmath>
#include <stdexcept>

#include "capwave/dispersion.hpp"

namespace capwave {

int comp_from_index(int j) {
    switch (j) {
        case -1: return m1;
        case 1: return p1;
        case -2: return m2;
        case 2: return p2;
        default: throw std::invalid_argument("component index must be one of -1, 1, -2, 2");
    }
}

int index_from_comp(int c) {
    static constexpr int idx[4] = {-1, 1, -2, 2};
    return idx[c];
}

const char* comp_name(int c) {
    static const char* names[4] = {"u_m1", "u_p1", "u_m2", "u_p2"};
    return names[c];
}

FieldSet operator+(const FieldSet& a, const FieldSet& b) {
    FieldSet r = a;
    for (int c = 0; c < 4; ++c) r[c] += b[c];
    return r;
}

FieldSet operator-(const FieldSet& a, const FieldSet& b) {
    FieldSet r = a;
    for (int c = 0; c < 4; ++c) r[c] -= b[c];
    return r;
}

FieldSet operator*(double s, const FieldSet& a) {
    FieldSet r = a;
    for (int c = 0; c < 4; ++c) r[c] = s * a[c];
    return r;
}

void axpy(FieldSet& y, double a, const FieldSet& x) {
    for (int c = 0; c < 4; ++c) {
        auto& yc = y[c].coeffs;
        const auto& xc = x[c].coeffs;
        for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += a * xc[i];
        y[c].is_real = y[c].is_real && x[c].is_real;
    }
}

TermFields::TermFields(const Grid1D& g)
    : t{SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g),
        SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g),
        SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g)} {}

const char* TermFields::name(int id) {
    static const char* names[count] = {"A1", "A2", "A3", "A4", "B1m", "B1p", "B2", "B3",
                                       "B4", "B5", "B6", "B7", "B8",  "B9",  "B10"};
    return names[id];
}

double term_weight(int comp, int id, double b) {
    using T = TermFields;
    const double s = comp_sign[comp];
    if (comp == m1 || comp == p1) {
        switch (id) {
            case T::A1: return -0.25;
            case T::A2: return 0.25;
            case T::A3: return -0.5 * s;
            case T::A4: return 0.5 * s;
            default: return 0.0;
        }
    }
    switch (id) {
        case T::B1m: return comp == m2 ? -1.0 : 0.0;
        case T::B1p: return comp == p2 ? -1.0 : 0.0;
        case T::B2: return 0.5 * s;
        case T::B3: return 0.5;
        case T::B4: return -0.5 * b;
        case T::B5: return -0.5;
        case T::B6: return 0.5;
        case T::B7: return -0.5 * s;
        case T::B8: return 0.5 * s;
        case T::B9: return -0.5 * s;
        case T::B10: return 0.5 * s;
        default: return 0.0;
    }
}

TruncatedModel::TruncatedModel(const Grid1D& grid, double b, Exec exec)
    : grid_(grid),
      b_(b),
      exec_(exec),
      sigma_(tabulate_real(grid, [b](double k) { return capwave::sigma(k, b); })),
      sigma_inv_(tabulate_real(grid, [b](double k) { return capwave::sigma_inv(k, b); })),
      k0_(tabulate(grid, [](double k) { return k0_symbol(k); })),
      sigma_k0_(tabulate(grid, [b](double k) { return capwave::sigma(k, b) * k0_symbol(k); })),
      sigma_sech2_(tabulate_real(grid, [b](double k) {
          const double t = std::tanh(k);
          return capwave::sigma(k, b) * (1.0 - t * t);
      })),
      deriv_(tabulate(grid, [](double k) { return cplx(0.0, k); })),
      deriv2_(tabulate_real(grid, [](double k) { return -k * k; })),
      k0_deriv_(tabulate_real(grid, [](double k) { return k * std::tanh(k); })) {
    if (!(b >= 0.0)) throw std::invalid_argument("model: b must be nonnegative");
    // the Nyquist mode has no partner; keep first derivatives Hermitian
    deriv_.values[grid.size() / 2] = 0.0;
    deriv_.hermitian = true;
    lin_minus_.resize(grid.size());
    lin_plus_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = omega(grid.wavenumber(i), b);
        lin_minus_[i] = cplx(0.0, -w);
        lin_plus_[i] = cplx(0.0, w);
    }
}

namespace {

struct Factor {
    SpectralField f;
    CVec phys;
};

void to_phys(Factor& x) {
    dealias(x.f);
    x.phys = to_physical(x.f);
}

}  // namespace

TermFields TruncatedModel::terms(const FieldSet& U, const FieldSet& V) const {
    require_same_grid(U.grid(), grid_, "model terms");
    require_same_grid(V.grid(), grid_, "model terms");
    const Exec ex = exec_;
    auto M = [ex](const Multiplier& m, const SpectralField& f) { return apply_multiplier(m, f, ex); };

    // first-factor (U) fields
    enum { vU, K0vU, yU, PU, QU, K0QU, kapU, YU, K0YU, nU };
    // second-factor (V) fields
    enum { vV, K0vV, Vm2, Vp2, kapV, skapV, K0dkapV, QV, K0QV, nV };

    std::vector<Factor> fu(nU, Factor{SpectralField(grid_), {}});
    std::vector<Factor> fv(nV, Factor{SpectralField(grid_), {}});
    {
        const SpectralField v = U[m1] + U[p1];
        const SpectralField D = U[m2] + U[p2];
        const SpectralField kap = M(sigma_inv_, U[m2] - U[p2]);
        fu[vU].f = v;
        fu[K0vU].f = M(k0_, v);
        fu[yU].f = M(sigma_inv_, U[m1] - U[p1]);
        fu[PU].f = antiderivative2(D);
        fu[QU].f = antiderivative(D);
        fu[K0QU].f = M(k0_, fu[QU].f);
        fu[kapU].f = kap;
        fu[YU].f = antiderivative(kap);
        fu[K0YU].f = M(k0_, fu[YU].f);
    }
    {
        const SpectralField v = V[m1] + V[p1];
        const SpectralField D = V[m2] + V[p2];
        const SpectralField sk = V[m2] - V[p2];
        fv[vV].f = v;
        fv[K0vV].f = M(k0_, v);
        fv[Vm2].f = V[m2];
        fv[Vp2].f = V[p2];
        fv[kapV].f = M(sigma_inv_, sk);
        fv[skapV].f = sk;
        fv[K0dkapV].f = M(k0_deriv_, fv[kapV].f);
        fv[QV].f = antiderivative(D);
        fv[K0QV].f = M(k0_, fv[QV].f);
    }

    if (ex == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < static_cast<int>(nU) + static_cast<int>(nV); ++i) to_phys(i < nU ? fu[i] : fv[i - nU]);
    } else {
        for (auto& x : fu) to_phys(x);
        for (auto& x : fv) to_phys(x);
    }

    struct Job {
        int a, b;
    };
    enum { pA1, pA2, pYV, pYK, pB1m, pB1p, pPk, pPsk, pB3, pB4, pB5, pB6, pYQ, pYKQ, pYYQ, pYYKQ, nP };
    const Job jobs[nP] = {{vU, vV},   {K0vU, K0vV}, {yU, vV},      {yU, K0vV}, {PU, Vm2},  {PU, Vp2},
                          {PU, kapV}, {PU, skapV},  {K0YU, kapV},  {kapU, K0dkapV}, {QU, QV},
                          {K0QU, K0QV}, {yU, QV},   {yU, K0QV},    {YU, QV},   {YU, K0QV}};
    std::vector<SpectralField> prod(nP, SpectralField(grid_));
    auto run_job = [&](int j) {
        const CVec& a = fu[jobs[j].a].phys;
        const CVec& b = fv[jobs[j].b].phys;
        CVec p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
        SpectralField out(grid_, fu[jobs[j].a].f.is_real && fv[jobs[j].b].f.is_real);
        detail::fft_forward(p, out.coeffs);
        dealias(out);
        if (out.is_real) hermitian_symmetrize(out);
        prod[j] = std::move(out);
    };
    if (ex == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < nP; ++j) run_job(j);
    } else {
        for (int j = 0; j < nP; ++j) run_job(j);
    }

    using T = TermFields;
    TermFields tf(grid_);
    tf.t[T::A1] = M(deriv_, prod[pA1]);
    tf.t[T::A2] = M(deriv_, prod[pA2]);
    tf.t[T::A3] = M(deriv_, M(sigma_k0_, M(k0_, prod[pYV]) - prod[pYK]));
    tf.t[T::A4] = M(deriv_, M(sigma_sech2_, prod[pYV]));
    tf.t[T::B1m] = M(deriv_, prod[pB1m]);
    tf.t[T::B1p] = M(deriv_, prod[pB1p]);
    tf.t[T::B2] = M(deriv_, M(sigma_, prod[pPk]) - prod[pPsk]);
    tf.t[T::B3] = M(deriv_, prod[pB3]);
    tf.t[T::B4] = M(deriv_, prod[pB4]);
    tf.t[T::B5] = M(deriv_, prod[pB5]);
    tf.t[T::B6] = M(deriv_, prod[pB6]);
    tf.t[T::B7] = M(deriv2_, M(sigma_k0_, M(k0_, prod[pYQ]) - prod[pYKQ]));
    tf.t[T::B8] = M(deriv2_, M(sigma_sech2_, prod[pYQ]));
    tf.t[T::B9] = M(deriv_, M(sigma_k0_, M(k0_, prod[pYYQ]) - prod[pYYKQ]));
    tf.t[T::B10] = M(deriv_, M(sigma_sech2_, prod[pYYQ]));
    return tf;
}

FieldSet TruncatedModel::combine(const TermFields& tf) const {
    FieldSet out(grid_);
    for (int c = 0; c < 4; ++c) {
        bool real = true;
        for (int id = 0; id < TermFields::count; ++id) {
            const double w = term_weight(c, id, b_);
            if (w == 0.0) continue;
            auto& o = out[c].coeffs;
            const auto& x = tf.t[static_cast<std::size_t>(id)].coeffs;
            for (std::size_t i = 0; i < o.size(); ++i) o[i] += w * x[i];
            real = real && tf.t[static_cast<std::size_t>(id)].is_real;
        }
        out[c].is_real = real;
    }
    return out;
}

FieldSet TruncatedModel::nonlinearity(const FieldSet& U) const {
    FieldSet n = bilinear(U, U);
    for (int c = 0; c < 4; ++c) {
        n[c].coeffs[0] = 0.0;  // every term is an exact derivative
        if (U[c].is_real) hermitian_symmetrize(n[c]);
    }
    return n;
}

FieldSet TruncatedModel::linear(const FieldSet& U) const {
    FieldSet out = U;
    for (int c = 0; c < 4; ++c) {
        const CVec& L = linear_symbol(c);
        for (std::size_t i = 0; i < L.size(); ++i) out[c].coeffs[i] *= L[i];
    }
    return out;
}

FieldSet TruncatedModel::rhs(const FieldSet& U) const { return linear(U) + nonlinearity(U); }

FieldSet diag_transform(const SpectralField& y, const SpectralField& v, const SpectralField& kappa,
                        const SpectralField& delta_aa, double b) {
    const Multiplier s = tabulate_real(y.grid, [b](double k) { return sigma(k, b); });
    const SpectralField sy = apply_multiplier(s, y);
    const SpectralField sk = apply_multiplier(s, kappa);
    FieldSet u(y.grid);
    u[m1] = 0.5 * (sy + v);
    u[p1] = 0.5 * (v - sy);
    u[m2] = 0.5 * (sk + delta_aa);
    u[p2] = 0.5 * (delta_aa - sk);
    return u;
}

PhysicalFields diag_inverse(const FieldSet& u, double b) {
    const Multiplier si = tabulate_real(u.grid(), [b](double k) { return sigma_inv(k, b); });
    return {apply_multiplier(si, u[m1] - u[p1]), u[m1] + u[p1], apply_multiplier(si, u[m2] - u[p2]),
            u[m2] + u[p2]};
}

}  // namespace capwave
