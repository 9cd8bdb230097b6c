#include "capwave/dispersion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace capwave {

namespace {

constexpr double series_cutoff = 1e-3;

// F(k) = (k + b k^3) tanh k and its first three derivatives
struct FDerivs {
    double f, f1, f2, f3;
};

FDerivs f_derivs(double k, double b) {
    const double p = k + b * k * k * k, p1 = 1.0 + 3.0 * b * k * k, p2 = 6.0 * b * k, p3 = 6.0 * b;
    const double t = std::tanh(k), s2 = 1.0 - t * t;
    const double t1 = s2, t2 = -2.0 * t * s2, t3 = s2 * (6.0 * t * t - 2.0);
    return {p * t, p1 * t + p * t1, p2 * t + 2.0 * p1 * t1 + p * t2,
            p3 * t + 3.0 * p2 * t1 + 3.0 * p1 * t2 + p * t3};
}

// omega = k (1 + a k^2 / 2 + e k^4 + ...) near k = 0
void series_coeffs(double b, double& a, double& e) {
    a = b - 1.0 / 3.0;
    const double c = 2.0 / 15.0 - b / 3.0;
    e = c / 2.0 - a * a / 8.0;
}

}  // namespace

double omega(double k, double b) {
    if (k == 0.0) return 0.0;
    const double ak = std::abs(k);
    const double v = std::sqrt((ak + b * ak * ak * ak) * std::tanh(ak));
    return k > 0.0 ? v : -v;
}

double omega_deriv(double k, double b, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("omega_deriv: order must be 1, 2 or 3, got " + std::to_string(order));
    const double ak = std::abs(k);
    // omega' is even, omega'' odd, omega''' even
    const double parity = (order == 2 && k < 0.0) ? -1.0 : 1.0;
    if (ak < series_cutoff) {
        double a, e;
        series_coeffs(b, a, e);
        switch (order) {
            case 1: return 1.0 + 1.5 * a * ak * ak + 5.0 * e * ak * ak * ak * ak;
            case 2: return parity * (3.0 * a * ak + 20.0 * e * ak * ak * ak);
            default: return 3.0 * a + 60.0 * e * ak * ak;
        }
    }
    const FDerivs d = f_derivs(ak, b);
    const double sq = std::sqrt(d.f);
    switch (order) {
        case 1: return d.f1 / (2.0 * sq);
        case 2: return parity * (2.0 * d.f * d.f2 - d.f1 * d.f1) / (4.0 * d.f * sq);
        default:
            return d.f3 / (2.0 * sq) - 3.0 * d.f1 * d.f2 / (4.0 * d.f * sq) +
                   3.0 * d.f1 * d.f1 * d.f1 / (8.0 * d.f * d.f * sq);
    }
}

double sigma(double k, double b) {
    const double ak = std::abs(k);
    if (ak < 1e-8) return 1.0;
    return std::sqrt((ak + b * ak * ak * ak) / std::tanh(ak));
}

double sigma_inv(double k, double b) { return 1.0 / sigma(k, b); }

std::complex<double> k0_symbol(double k) { return {0.0, -std::tanh(k)}; }

ModelParams::ModelParams(double k0_, double b_) : k0(k0_), b(b_) {
    if (!(k0_ > 0.0) || !std::isfinite(k0_)) throw std::invalid_argument("k0 must be positive");
    if (!(b_ >= 0.0) || !std::isfinite(b_)) throw std::invalid_argument("b must be nonnegative");
    omega0 = omega(k0, b);
    cg = omega_deriv(k0, b, 1);
    omega2 = omega_deriv(k0, b, 2);
}

}  // namespace capwave
