#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace capwave {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

// Periodic uniform grid on [0, length). Spectral arrays use FFT ordering:
// index i holds mode i for i < n/2 and mode i - n otherwise.
class Grid1D {
public:
    Grid1D(std::size_t n_points, double length);

    std::size_t size() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return length_ / static_cast<double>(n_); }
    double position(std::size_t i) const { return spacing() * static_cast<double>(i); }

    long mode_of(std::size_t idx) const;
    std::size_t index_of(long mode) const;
    double wavenumber(std::size_t idx) const;
    double fundamental() const;

    // largest |mode| that survives 2/3-rule dealiasing
    long dealias_limit() const { return static_cast<long>(n_) / 3; }

    bool has_mode(long mode) const;
    bool operator==(const Grid1D& o) const { return n_ == o.n_ && length_ == o.length_; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }

private:
    std::size_t n_;
    double length_;
};

// Fourier coefficients c_j with f(x) = sum_j c_j exp(i k_j x).
struct SpectralField {
    Grid1D grid;
    CVec coeffs;
    bool is_real = true;

    explicit SpectralField(const Grid1D& g, bool real = true)
        : grid(g), coeffs(g.size(), cplx(0.0, 0.0)), is_real(real) {}
    SpectralField(const Grid1D& g, CVec c, bool real)
        : grid(g), coeffs(std::move(c)), is_real(real) {}

    cplx& operator[](std::size_t i) { return coeffs[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs[i]; }
    cplx at_mode(long mode) const { return coeffs[grid.index_of(mode)]; }
    std::size_t size() const { return coeffs.size(); }
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
SpectralField operator*(cplx s, const SpectralField& a);
SpectralField& operator+=(SpectralField& a, const SpectralField& b);
SpectralField& operator-=(SpectralField& a, const SpectralField& b);

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where);

}  // namespace capwave
