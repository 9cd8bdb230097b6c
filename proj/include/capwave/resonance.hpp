#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "capwave/spectral.hpp"

namespace capwave {

// r(k) = omega(k) - omega(k - k0) - omega(k0)
double r_hat(double k, double b, double k0);
// d/dk of r_hat
double dr_hat(double k, double b, double k0);
// r_hat(k)/(k - k0), continuous through k = k0; its zeros are the nontrivial zeros of r_hat
double r_hat_reduced(double k, double b, double k0);

// i (s1 omega(k) + omega(l) - s2 omega(m)), s = sign of j
std::complex<double> r_general(int j1, int j2, double k, double l, double m, double b);

enum class ZeroClass { only_k0, two_zeros, extra_zero_pair, tangency };
const char* zero_class_name(ZeroClass c);

struct ResonanceReport {
    double k0 = 0.0, b = 0.0, k_max = 0.0;
    std::vector<double> zeros;         // ascending, on [k0/2, k_max], includes k0
    std::vector<double> double_zeros;  // subset of zeros where r_hat touches 0
    ZeroClass classification = ZeroClass::only_k0;
    std::optional<double> k1;          // largest zero above k0
};

struct ZeroScanOptions {
    double dk = 0.01;
    double k_tol = 1e-10;
    double tangency_tol = 1e-8;
};

double default_k_max(double k0, double b);
// throws std::runtime_error("k_max too small ...") when the tail is not settled at k_max
ResonanceReport find_zeros(double k0, double b, double k_max, const ZeroScanOptions& opt = {});
ResonanceReport find_zeros(double k0, double b);

struct CriticalBonds {
    double b0 = 0.0;
    double b1 = 0.0;
};

// b1: largest b in (0,1/3) at which r_hat has a zero on [k0/2, inf) other than k0.
// b0: smallest b at which such a zero reaches [k0/2, k0], i.e. k0 < max{k1, k0 - k1} fails.
CriticalBonds critical_bonds(double k0, Exec exec = Exec::serial);
// memoized per k0
const CriticalBonds& critical_bonds_cached(double k0);

// largest zero of r_hat above k0; requires 0 < b < b0(k0)
double k1_of_b(double k0, double b);

struct InflectionPoints {
    double k3 = 0.0;  // zero of omega''
    double k4 = 0.0;  // zero of omega''' beyond k3
};
InflectionPoints inflection_points(double b);

struct NonresonanceReport {
    bool ok = true;
    std::vector<std::string> reasons;
    double margin = 0.0;  // smallest of the checked quantities
};
NonresonanceReport nonresonance_check(double k0, double b, int M = 6, double tol = 1e-6);

}  // namespace capwave
