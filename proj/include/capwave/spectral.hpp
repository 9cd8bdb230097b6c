#pragma once

#include <functional>

#include "capwave/grid.hpp"

namespace capwave {

// Selects the serial reference loops or their OpenMP counterparts.
enum class Exec { serial, parallel };

using Symbol = std::function<cplx(double)>;

// A symbol sampled at the wavenumbers of one grid.
struct Multiplier {
    Grid1D grid;
    CVec values;
    bool hermitian = true;  // symbol(-k) == conj(symbol(k)) on the grid
};

Multiplier tabulate(const Grid1D& grid, const Symbol& symbol);
Multiplier tabulate_real(const Grid1D& grid, const std::function<double(double)>& symbol);

CVec to_physical(const SpectralField& f);
SpectralField to_spectral(const Grid1D& grid, const CVec& samples, bool is_real);
SpectralField sample(const Grid1D& grid, const std::function<cplx(double)>& fn, bool is_real);
SpectralField grid_mode(const Grid1D& grid, long mode, cplx amplitude = 1.0);

SpectralField apply_multiplier(const Symbol& symbol, const SpectralField& f, Exec exec = Exec::serial);
SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f, Exec exec = Exec::serial);

SpectralField derivative(const SpectralField& f, int order = 1);
// symbol 1/(ik); zero mode of the result is 0
SpectralField antiderivative(const SpectralField& f);
// symbol -1/k^2; zero mode of the result is 0
SpectralField antiderivative2(const SpectralField& f);

enum class Band { low, high };
SpectralField project(const SpectralField& f, double cut, Band band);

// Physical-space product with 2/3-rule dealiasing of inputs and output.
SpectralField product(const SpectralField& f, const SpectralField& g, Exec exec = Exec::serial);
// [M, g] f = M(g f) - g M(f)
SpectralField commutator_apply(const Symbol& symbol, const SpectralField& g, const SpectralField& f,
                               Exec exec = Exec::serial);
SpectralField commutator_apply(const Multiplier& m, const SpectralField& g, const SpectralField& f,
                               Exec exec = Exec::serial);

void dealias(SpectralField& f);
void hermitian_symmetrize(SpectralField& f);
// max_k |c(k) - conj(c(-k))| / max_k |c(k)|
double hermitian_defect(const SpectralField& f);

// L^2 norm over one period via Parseval
double l2_norm(const SpectralField& f);
// (sum (1+k^2)^s |c_k|^2 * L)^(1/2)
double sobolev_norm(const SpectralField& f, double s);
double max_abs_coefficient(const SpectralField& f);

namespace detail {
void multiply_pointwise_serial(const CVec& a, const CVec& b, CVec& out);
void multiply_pointwise_omp(const CVec& a, const CVec& b, CVec& out);
void scale_pointwise_serial(const CVec& m, CVec& v);
void scale_pointwise_omp(const CVec& m, CVec& v);
void fft_forward(const CVec& in, CVec& out);   // includes 1/n
void fft_backward(const CVec& in, CVec& out);  // unscaled
}  // namespace detail

}  // namespace capwave
