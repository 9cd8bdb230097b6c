#include "capwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace capwave {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex plan_mutex;

const PlanPair& plans_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    CVec a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_BACKWARD, flags);
    if (!p.forward || !p.backward) throw std::runtime_error("fftw: plan creation failed");
    return cache.emplace(n, p).first->second;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

namespace detail {

void fft_forward(const CVec& in, CVec& out) {
    const std::size_t n = in.size();
    out.resize(n);
    const PlanPair& p = plans_for(n);
    fftw_execute_dft(p.forward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double s = 1.0 / static_cast<double>(n);
    for (auto& c : out) c *= s;
}

void fft_backward(const CVec& in, CVec& out) {
    const std::size_t n = in.size();
    out.resize(n);
    const PlanPair& p = plans_for(n);
    fftw_execute_dft(p.backward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

void multiply_pointwise_serial(const CVec& a, const CVec& b, CVec& out) {
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

void multiply_pointwise_omp(const CVec& a, const CVec& b, CVec& out) {
    out.resize(a.size());
    const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_pointwise_serial(const CVec& m, CVec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
}

void scale_pointwise_omp(const CVec& m, CVec& v) {
    const long n = static_cast<long>(v.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) v[i] *= m[i];
}

}  // namespace detail

Multiplier tabulate(const Grid1D& grid, const Symbol& symbol) {
    Multiplier m{grid, CVec(grid.size()), true};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = grid.wavenumber(i);
        const cplx v = symbol(k);
        if (!finite(v))
            throw std::invalid_argument("multiplier: non-finite symbol value at k = " + std::to_string(k));
        m.values[i] = v;
    }
    const long half = static_cast<long>(grid.size()) / 2;
    for (long j = 1; j < half && m.hermitian; ++j) {
        const cplx a = m.values[grid.index_of(j)];
        const cplx b = m.values[grid.index_of(-j)];
        const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        if (std::abs(a - std::conj(b)) > 1e-14 * scale) m.hermitian = false;
    }
    if (std::abs(m.values[0].imag()) > 1e-14 * std::max(std::abs(m.values[0]), 1e-300)) m.hermitian = false;
    return m;
}

Multiplier tabulate_real(const Grid1D& grid, const std::function<double(double)>& symbol) {
    return tabulate(grid, [&](double k) { return cplx(symbol(k), 0.0); });
}

CVec to_physical(const SpectralField& f) {
    CVec out;
    detail::fft_backward(f.coeffs, out);
    return out;
}

SpectralField to_spectral(const Grid1D& grid, const CVec& samples, bool is_real) {
    if (samples.size() != grid.size()) throw std::invalid_argument("to_spectral: size mismatch");
    SpectralField f(grid, is_real);
    detail::fft_forward(samples, f.coeffs);
    if (is_real) hermitian_symmetrize(f);
    return f;
}

SpectralField sample(const Grid1D& grid, const std::function<cplx(double)>& fn, bool is_real) {
    CVec v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid.position(i));
    return to_spectral(grid, v, is_real);
}

SpectralField grid_mode(const Grid1D& grid, long mode, cplx amplitude) {
    SpectralField f(grid, false);
    f.coeffs[grid.index_of(mode)] = amplitude;
    return f;
}

SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f, Exec exec) {
    require_same_grid(m.grid, f.grid, "apply_multiplier");
    SpectralField out = f;
    if (exec == Exec::parallel)
        detail::scale_pointwise_omp(m.values, out.coeffs);
    else
        detail::scale_pointwise_serial(m.values, out.coeffs);
    out.is_real = f.is_real && m.hermitian;
    return out;
}

SpectralField apply_multiplier(const Symbol& symbol, const SpectralField& f, Exec exec) {
    return apply_multiplier(tabulate(f.grid, symbol), f, exec);
}

SpectralField derivative(const SpectralField& f, int order) {
    SpectralField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const cplx ik(0.0, f.grid.wavenumber(i));
        out.coeffs[i] *= std::pow(ik, order);
    }
    // odd derivatives of the Nyquist mode are not Hermitian
    if (order % 2 != 0) out.coeffs[f.size() / 2] = 0.0;
    return out;
}

SpectralField antiderivative(const SpectralField& f) {
    SpectralField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = f.grid.wavenumber(i);
        out.coeffs[i] = k == 0.0 ? cplx(0.0) : out.coeffs[i] / cplx(0.0, k);
    }
    out.coeffs[f.size() / 2] = 0.0;
    return out;
}

SpectralField antiderivative2(const SpectralField& f) {
    SpectralField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = f.grid.wavenumber(i);
        out.coeffs[i] = k == 0.0 ? cplx(0.0) : -out.coeffs[i] / (k * k);
    }
    return out;
}

SpectralField project(const SpectralField& f, double cut, Band band) {
    if (!(cut > 0.0)) throw std::invalid_argument("project: cut must be positive");
    SpectralField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const bool low = std::abs(f.grid.wavenumber(i)) <= cut;
        if (low != (band == Band::low)) out.coeffs[i] = 0.0;
    }
    return out;
}

void dealias(SpectralField& f) {
    const long lim = f.grid.dealias_limit();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.grid.mode_of(i)) > lim) f.coeffs[i] = 0.0;
}

SpectralField product(const SpectralField& f, const SpectralField& g, Exec exec) {
    require_same_grid(f.grid, g.grid, "product");
    SpectralField fd = f, gd = g;
    dealias(fd);
    dealias(gd);
    const CVec pf = to_physical(fd), pg = to_physical(gd);
    CVec prod;
    if (exec == Exec::parallel)
        detail::multiply_pointwise_omp(pf, pg, prod);
    else
        detail::multiply_pointwise_serial(pf, pg, prod);
    SpectralField out(f.grid, f.is_real && g.is_real);
    detail::fft_forward(prod, out.coeffs);
    dealias(out);
    if (out.is_real) hermitian_symmetrize(out);
    return out;
}

SpectralField commutator_apply(const Multiplier& m, const SpectralField& g, const SpectralField& f, Exec exec) {
    require_same_grid(g.grid, f.grid, "commutator_apply");
    SpectralField a = apply_multiplier(m, product(g, f, exec), exec);
    a -= product(g, apply_multiplier(m, f, exec), exec);
    return a;
}

SpectralField commutator_apply(const Symbol& symbol, const SpectralField& g, const SpectralField& f, Exec exec) {
    return commutator_apply(tabulate(f.grid, symbol), g, f, exec);
}

void hermitian_symmetrize(SpectralField& f) {
    const std::size_t n = f.size();
    const long half = static_cast<long>(n) / 2;
    f.coeffs[0] = cplx(f.coeffs[0].real(), 0.0);
    for (long j = 1; j < half; ++j) {
        const std::size_t ip = f.grid.index_of(j), im = f.grid.index_of(-j);
        const cplx avg = 0.5 * (f.coeffs[ip] + std::conj(f.coeffs[im]));
        f.coeffs[ip] = avg;
        f.coeffs[im] = std::conj(avg);
    }
    f.coeffs[n / 2] = cplx(f.coeffs[n / 2].real(), 0.0);
    f.is_real = true;
}

double hermitian_defect(const SpectralField& f) {
    const long half = static_cast<long>(f.size()) / 2;
    double worst = std::abs(f.coeffs[0].imag()), top = max_abs_coefficient(f);
    for (long j = 1; j < half; ++j)
        worst = std::max(worst, std::abs(f.at_mode(j) - std::conj(f.at_mode(-j))));
    worst = std::max(worst, std::abs(f.coeffs[f.size() / 2].imag()));
    return top > 0.0 ? worst / top : 0.0;
}

double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs) s += std::norm(c);
    return std::sqrt(s * f.grid.length());
}

double sobolev_norm(const SpectralField& f, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = f.grid.wavenumber(i);
        acc += std::pow(1.0 + k * k, s) * std::norm(f.coeffs[i]);
    }
    return std::sqrt(acc * f.grid.length());
}

double max_abs_coefficient(const SpectralField& f) {
    double m = 0.0;
    for (const auto& c : f.coeffs) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace capwave
