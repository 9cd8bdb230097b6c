#pragma once

#include <complex>

namespace capwave {

// omega(k,b) = sgn(k) sqrt((k + b k^3) tanh k): capillary-gravity waves on unit depth.
double omega(double k, double b);
// order in {1,2,3}; analytic, with a series branch near k = 0
double omega_deriv(double k, double b, int order);
// sigma(k,b) = sqrt((k + b k^3) / tanh k), sigma(0) = 1
double sigma(double k, double b);
double sigma_inv(double k, double b);
// symbol of the Dirichlet-Neumann-type operator: -i tanh k
std::complex<double> k0_symbol(double k);

struct ModelParams {
    double k0 = 2.0;
    double b = 0.0;
    double omega0 = 0.0;  // omega(k0,b)
    double cg = 0.0;      // group velocity
    double omega2 = 0.0;  // second derivative of omega at k0

    ModelParams() = default;
    ModelParams(double k0, double b);
};

}  // namespace capwave
