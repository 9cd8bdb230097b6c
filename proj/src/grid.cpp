#include "capwave/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace capwave {

Grid1D::Grid1D(std::size_t n_points, double length) : n_(n_points), length_(length) {
    if (n_points < 2 || n_points % 2 != 0)
        throw std::invalid_argument("grid: n_points must be even and >= 2, got " +
                                    std::to_string(n_points));
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("grid: length must be positive and finite");
}

long Grid1D::mode_of(std::size_t idx) const {
    const long n = static_cast<long>(n_);
    const long i = static_cast<long>(idx);
    return i < n / 2 ? i : i - n;
}

std::size_t Grid1D::index_of(long mode) const {
    const long n = static_cast<long>(n_);
    if (mode < -n / 2 || mode >= n / 2)
        throw std::out_of_range("grid: mode " + std::to_string(mode) + " not representable");
    return static_cast<std::size_t>(mode < 0 ? mode + n : mode);
}

bool Grid1D::has_mode(long mode) const {
    const long n = static_cast<long>(n_);
    return mode >= -n / 2 && mode < n / 2;
}

double Grid1D::fundamental() const { return 2.0 * std::numbers::pi / length_; }

double Grid1D::wavenumber(std::size_t idx) const {
    return fundamental() * static_cast<double>(mode_of(idx));
}

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where) {
    if (a != b) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    SpectralField r = a;
    r += b;
    return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    SpectralField r = a;
    r -= b;
    return r;
}

SpectralField& operator+=(SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid, b.grid, "field add");
    for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] += b.coeffs[i];
    a.is_real = a.is_real && b.is_real;
    return a;
}

SpectralField& operator-=(SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid, b.grid, "field subtract");
    for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] -= b.coeffs[i];
    a.is_real = a.is_real && b.is_real;
    return a;
}

SpectralField operator*(double s, const SpectralField& a) {
    SpectralField r = a;
    for (auto& c : r.coeffs) c *= s;
    return r;
}

SpectralField operator*(cplx s, const SpectralField& a) {
    SpectralField r = a;
    for (auto& c : r.coeffs) c *= s;
    r.is_real = a.is_real && s.imag() == 0.0;
    return r;
}

}  // namespace capwave
