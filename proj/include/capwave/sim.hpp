#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "capwave/kernels.hpp"
#include "capwave/model.hpp"
#include "capwave/wavepacket.hpp"

namespace capwave {

enum class Integrator { IFRK4 };

struct SimConfig {
    double eps = 0.1;
    double k0 = 2.0;
    double b = 0.0;
    std::size_t n = 256;
    double L = 0.0;  // 0 selects 2 pi * 16 / k0
    double dt = 0.01;
    double t_end = 1.0;
    Integrator integrator = Integrator::IFRK4;
    bool dealias = true;
    bool corrections = true;
    bool linear_only = false;
    Exec exec = Exec::serial;
};

// throws std::invalid_argument naming the offending field
void validate(const SimConfig& cfg);

struct SimState {
    FieldSet u;
    double t = 0.0;
    long step = 0;
    explicit SimState(const Grid1D& g) : u(g) {}
    SimState(FieldSet f, double t0) : u(std::move(f)), t(t0) {}
};

// Lawson integrating-factor RK4 for the quadratic-truncated model.
class Simulator {
public:
    Simulator(const Grid1D& grid, double b, Exec exec = Exec::serial, bool linear_only = false);

    const TruncatedModel& model() const { return model_; }
    bool linear_only() const { return linear_only_; }

    // throws std::runtime_error with the step index on a non-finite state
    void step(SimState& s, double dt) const;
    using Observer = std::function<void(const SimState&)>;
    // advances to t_end with steps of at most dt; the observer sees the state every `stride` steps
    void run(SimState& s, double dt, double t_end, const Observer& obs = {}, long stride = 0) const;

    FieldSet nonlinear(const FieldSet& u) const;

private:
    void phase(FieldSet& u, double h) const;

    TruncatedModel model_;
    bool linear_only_;
};

// max over components of max |Im| of the physical samples
double reality_defect(const FieldSet& u);

struct ResidualNorms {
    std::array<double, 4> comp{};  // L^2 norm of each component of the residual
    double total = 0.0;            // sqrt of the sum of squares
};
// rhs(eps Psi) - d/dt(eps Psi) at time t; the envelope in p is taken at slow time eps^2 t
ResidualNorms residual(const TruncatedModel& model, const WavePacket& p, double t);

struct OrderFit {
    std::vector<double> eps;
    std::vector<double> values;
    double order = 0.0;  // least-squares slope of log value against log eps
};
double fit_order(const std::vector<double>& eps, const std::vector<double>& values);

struct ResidualScanConfig {
    double k0 = 2.0;
    double b = 0.0;
    std::vector<double> eps{0.2, 0.1, 0.05};
    bool corrections = true;
    double L_xi = 80.0;
    std::size_t n_env = 64;
    double amplitude = 1.0;
    double width = 3.0;
};
OrderFit residual_scan(const ResidualScanConfig& cfg, Exec exec = Exec::serial);

// (L^2)^2 x (H^2)^2 distance: L^2 on u_-1, u_1 and H^2 on u_-2, u_2
double split_norm(const FieldSet& u);

enum class Horizon { tau0_over_eps, tau0_over_eps2 };

struct ErrorScanConfig {
    double k0 = 2.0;
    double b = 0.0;
    std::vector<double> eps{0.15, 0.1, 0.07};
    double tau0 = 0.5;
    Horizon horizon = Horizon::tau0_over_eps2;
    double L_xi = 80.0;
    std::size_t n_env = 64;
    double amplitude = 1.0;
    double width = 3.0;
    double dt = 0.0;      // 0 selects 0.05
    int samples = 10;     // comparison times per run
    Exec exec = Exec::serial;
};

struct ErrorScanRow {
    double eps = 0.0;
    double error = 0.0;      // sup over sampled times of split_norm(u - eps Psi)
    double size = 0.0;       // split_norm(eps Psi(0))
    double t_end = 0.0;
    long steps = 0;
    bool flagged = false;    // error exceeded the solution size
    bool blew_up = false;    // the simulation produced a non-finite state
    std::vector<double> times, errors;
};

struct ErrorScanResult {
    std::vector<ErrorScanRow> rows;
    double order = 0.0;  // NaN when a run blew up
    double nu = 0.0;
    bool monotone = true;
};
ErrorScanResult error_scan(const ErrorScanConfig& cfg);

struct ConsistencyDefect {
    double first = 0.0;   // d^{-1} sigma^{-1}(u_-2 - u_2) - sigma^{-1} d (u_-1 - u_1)
    double second = 0.0;  // d^{-2}(u_-2 + u_2) - v + d^{-1}(K0 v sigma^{-1}(u_-2 - u_2))
};
ConsistencyDefect consistency_residual(const FieldSet& u, double b);

struct EnergyDiagnostic {
    int l = 0;
    double value = 0.0;
    double plain = 0.0;       // 1/2 sum_j |d^l R_j|^2
    double correction = 0.0;  // the eps-sized normal-form part
};
// R = (u - eps Psi) / eps^{5/2} with weights rho^l and the n_hat correction along the carrier
EnergyDiagnostic energy_diagnostic(const FieldSet& u, const WavePacket& p, double t, int l,
                                   const KernelParams& kp);

}  // namespace capwave
