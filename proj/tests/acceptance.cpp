// One pass/fail line per acceptance criterion; exit status 1 when any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capwave/dispersion.hpp"
#include "capwave/kernels.hpp"
#include "capwave/nls.hpp"
#include "capwave/resonance.hpp"
#include "capwave/sim.hpp"
#include "capwave/stability.hpp"
#include "capwave/twi.hpp"
#include "capwave/wavepacket.hpp"

using namespace capwave;

namespace {

constexpr cplx I(0.0, 1.0);

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> check;
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

// ---- 1 -------------------------------------------------------------------------------------

Outcome critical_bonds_cli() {
    const std::string cmd = std::string(CAPWAVE_CLI_PATH) + " resonance critical --k0 2";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return {false, "could not start the CLI"};
    std::string out;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = ::pclose(pipe);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "CLI exit status " + std::to_string(status)};
    double b0 = NAN, b1 = NAN;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("b0=", 0) == 0) b0 = std::stod(line.substr(3));
        if (line.rfind("b1=", 0) == 0) b1 = std::stod(line.substr(3));
    }
    const double d0 = std::abs(b0 - 0.2240838469), d1 = std::abs(b1 - 0.2396825654);
    return {d0 <= 1e-6 && d1 <= 1e-6, "b0=" + fmt(b0, 11) + " b1=" + fmt(b1, 11)};
}

// ---- 2 -------------------------------------------------------------------------------------

Outcome panel_classification() {
    struct Panel {
        const char* label;
        double b;
        int expected;  // -1 marks a tangency
    };
    const Panel panels[] = {{"i", 1.0 / 3.0, 1},          {"ii", 1.0 / 3.5, 1}, {"iii", 1.0 / 4.15, 1},
                            {"iv", 0.2396825654, -1},     {"v", 1.0 / 4.25, 3}, {"vi", 0.2240838469, -1},
                            {"vii", 1.0 / 5.0, 2},        {"viii", 1.0 / 200.0, 2}, {"ix", 0.0, 1}};
    bool ok = true;
    std::string detail;
    for (const Panel& p : panels) {
        const ResonanceReport r = find_zeros(2.0, p.b, 60.0);
        const bool tangent = !r.double_zeros.empty();
        const bool match = p.expected < 0 ? tangent : (!tangent && static_cast<int>(r.zeros.size()) == p.expected);
        ok = ok && match;
        detail += std::string(p.label) + ":" + (tangent ? "T" : std::to_string(r.zeros.size())) + (match ? "" : "(!)") + " ";
    }
    return {ok, detail + "[expected 1 1 1 T 3 T 2 2 1]"};
}

// ---- 3 -------------------------------------------------------------------------------------

Outcome k1_asymptote() {
    const double b = 1e-4, k0 = 2.0;
    const double k1 = k1_of_b(k0, b);
    const double v = b * k1 * 9.0 * k0 / (4.0 * std::tanh(k0));
    return {v >= 0.99 && v <= 1.01, "k1=" + fmt(k1, 8) + " scaled=" + fmt(v, 8)};
}

// ---- 4 -------------------------------------------------------------------------------------

Outcome kernel_agreement() {
    const Grid1D g(256, 2.0 * M_PI * 16.0 / 2.0);
    std::mt19937 rng(2024);
    const long lim = g.dealias_limit();
    std::uniform_int_distribution<long> d(-lim, lim);
    double worst1 = 0.0, worst2 = 0.0, worst_sym = 0.0;
    int pairs = 0;
    for (double b : {0.0, 1.0 / 200.0, 0.1}) {
        const TruncatedModel model(g, b);
        for (int n = 0; n < 60;) {
            const long l = d(rng), m = d(rng);
            // l is the packet mode on the carrier band, never the zero mode
            if (l == 0 || m == 0 || l + m == 0 || std::abs(l + m) > lim) continue;
            ++n;
            ++pairs;
            const double k = g.fundamental() * static_cast<double>(l + m), mm = g.fundamental() * static_cast<double>(m);
            auto rel = [](cplx a, cplx c) { return c == 0.0 ? std::abs(a) : std::abs(a - c) / std::abs(c); };
            for (int j1 : {-1, 1})
                for (int j2 : {-1, 1})
                    worst1 = std::max(worst1, rel(extract_q_total(model, j1, j2, l, m), q_total(j1, j2, k, mm, b)));
            for (int j1 : {-2, 2})
                for (int j2 : {-2, 2}) {
                    worst2 = std::max(worst2, rel(extract_q_total(model, j1, j2, l, m), q_total(j1, j2, k, mm, b)));
                    for (int mu = 1; mu <= 4; ++mu) {
                        const cplx cf = q_symbol(j1, j2, mu, k, mm, b);
                        worst2 = std::max(worst2, rel(extract_q_part(model, j1, j2, mu, l, m), cf));
                        const double scale = std::max(1.0, std::abs(cf));
                        if (j1 == j2)
                            worst_sym = std::max(worst_sym, std::abs(cf + q_symbol(j1, j2, mu, -k, -mm, b)) / scale);
                        if (j1 == -2 && j2 == 2)
                            worst_sym = std::max(worst_sym, std::abs(cf + q_symbol(2, -2, mu, k, mm, b)) / scale);
                    }
                }
        }
    }
    const bool ok = worst1 <= 1e-8 && worst2 <= 1e-8 && worst_sym <= 1e-12;
    return {ok, std::to_string(pairs) + " pairs; |j|=1 rel " + fmt(worst1, 3) + ", |j|=2 rel " + fmt(worst2, 3) +
                    ", symmetry " + fmt(worst_sym, 3)};
}

// ---- 5 -------------------------------------------------------------------------------------

Outcome normal_form_sanity() {
    bool ok = true;
    std::vector<double> scaled;
    for (double eps : {0.2, 0.1, 0.05}) {
        const KernelParams p = make_kernel_params(2.0, 0.1, eps);
        double sup_low = 0.0;
        for (int j1 : {-1, 1, -2, 2})
            for (int j2 : {-j1, j1})
                for (int ell : {-1, 1})
                    for (int j = 1; j <= (std::abs(j1) == 2 ? 2 : 1); ++j) {
                        for (double k : {0.0, p.k0, -p.k0}) ok = ok && std::isfinite(std::abs(n_hat(j1, j2, ell, j, k, p)));
                        for (int i = -200; i <= 200; ++i) {
                            const double v = std::abs(n_hat(j1, j2, ell, j, p.delta0 * i / 200.0, p));
                            ok = ok && std::isfinite(v);
                            sup_low = std::max(sup_low, v);
                        }
                    }
        scaled.push_back(eps * sup_low);
    }
    // O(1/eps): eps * sup stays bounded as eps shrinks
    const bool low_ok = scaled[2] <= 2.0 * scaled[0] && scaled[1] <= 2.0 * scaled[0];
    const KernelParams p = make_kernel_params(2.0, 0.1, 0.1);
    double near = 0.0, far = 0.0;
    for (int j : {-1, 1, -2, 2})
        for (double k = 10.0; k <= 1000.0; k *= 1.01)
            for (double s : {-1.0, 1.0}) {
                const double v = std::abs(n_hat(j, j, 1, 1, s * k, p)) / k;
                ok = ok && std::isfinite(v);
                (k <= 100.0 ? near : far) = std::max(k <= 100.0 ? near : far, v);
            }
    const bool growth_ok = far <= 2.0 * near;
    return {ok && low_ok && growth_ok, "eps*sup|P0 n| = " + fmt(scaled[0], 4) + ", " + fmt(scaled[1], 4) + ", " +
                                           fmt(scaled[2], 4) + "; sup|n/k| on [10,100] " + fmt(near, 4) +
                                           ", on [100,1000] " + fmt(far, 4)};
}

// ---- 6 -------------------------------------------------------------------------------------

Outcome twi_checks() {
    auto coeffs = [](cplx c0, cplx c1, cplx c2) {
        TWICoeffs c;
        c.c0 = c0;
        c.c1 = c1;
        c.c2 = c2;
        return c;
    };
    const TWICoeffs stable = coeffs(I, I, -2.0 * I), unstable = coeffs(-I, I, I);

    // conservation over tau in [0, 50]
    double drift = 0.0;
    {
        const TWITrajectory t = integrate({1.0, 0.3, 0.2 * I, 0.0}, stable, 1e-3, 50.0, 100);
        for (const auto& s : t.samples) drift = std::max(drift, std::abs(s.E - t.samples.front().E) / std::abs(t.samples.front().E));
        const StabilityVerdict v = stability(2.0, 1.0 / 200.0);
        const TWICoeffs c = twi_coeffs(2.0, v.resonant_k.front(), 1, 1.0 / 200.0);
        const TWITrajectory u = integrate({0.1, 0.05, 0.05, 0.0}, c, 1e-3, 50.0, 100);
        for (const auto& s : u.samples) drift = std::max(drift, std::abs(s.E - u.samples.front().E) / std::abs(u.samples.front().E));
    }
    // the NLS subspace is a set of fixed points
    bool fixed = true;
    for (const auto& s : integrate({0.8 - 0.1 * I, 0.0, 0.0, 0.0}, unstable, 1e-2, 50.0).samples)
        fixed = fixed && s.A0 == cplx(0.8, -0.1) && s.A1 == 0.0 && s.A2 == 0.0;

    // growth iff the ratio is positive: synthetic pair, then coefficients extracted from the model
    bool iff = stability_experiment(unstable).amplification >= 10.0 && stability_experiment(stable).amplification < 10.0;
    std::string cases;
    const CriticalBonds& cb = critical_bonds_cached(2.0);
    for (double b : {1.0 / 200.0, 0.01, 0.05, 0.1, 0.5 * (cb.b0 + cb.b1)}) {
        const StabilityVerdict v = stability(2.0, b);
        for (double k1 : v.resonant_k) {
            const TWICoeffs c = twi_coeffs_extracted(2.0, k1, 1, b, 64);
            const double ratio = (c.c1 / c.c2).real();
            const bool grows = stability_experiment(c).amplification >= 10.0;
            iff = iff && (grows == (ratio > 0.0));
            cases += " b=" + fmt(b, 4) + (ratio > 0.0 ? "(+,grows)" : "(-,bounded)");
            if (grows != (ratio > 0.0)) cases += "(!)";
        }
    }
    return {drift <= 1e-8 && fixed && iff,
            "E drift " + fmt(drift, 3) + ", fixed points " + (fixed ? "exact" : "moved") + ";" + cases};
}

// ---- 7 -------------------------------------------------------------------------------------

Outcome nls_checks() {
    auto field = [](std::size_t n, double L) { return EnvelopeField{Grid1D(n, L), CVec(n, 0.0), 0.0}; };
    double exact_err = 0.0;
    {
        const NLSCoeffs c = nls_coefficients(2.0, 0.0);
        EnvelopeField f = field(32, 10.0);
        const cplx a(0.6, -0.3);
        for (auto& x : f.A) x = a;
        const EnvelopeField g = nls_evolve(f, c, 0.01, 5.0);
        for (const auto& x : g.A) exact_err = std::max(exact_err, std::abs(x - a * std::exp(I * c.nu * std::norm(a) * 5.0)));

        const NLSCoeffs lin = nls_coefficients_user(2.0, 0.0, 0.0);
        EnvelopeField m = field(64, 2.0 * M_PI * 4.0);
        const double K = 3.0 * m.grid.fundamental();
        for (std::size_t i = 0; i < 64; ++i) m.A[i] = std::exp(I * K * m.grid.position(i));
        const EnvelopeField h = nls_evolve(m, lin, 0.01, 2.0);
        for (std::size_t i = 0; i < 64; ++i)
            exact_err = std::max(exact_err, std::abs(h.A[i] - m.A[i] * std::exp(-I * lin.half_omega2 * K * K * 2.0)));
    }
    auto l2 = [](const EnvelopeField& a, const CVec& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) s += std::norm(a.A[i] - b[i]);
        return std::sqrt(s * a.grid.spacing());
    };
    NLSCoeffs foc = nls_coefficients_user(2.0, 0.0, 1.0);
    foc.half_omega2 = 0.5;
    double soliton_err = 0.0;
    {
        const double L = 50.0;
        EnvelopeField f = field(512, L);
        for (std::size_t i = 0; i < 512; ++i) f.A[i] = 1.0 / std::cosh(f.grid.position(i) - 0.5 * L);
        const EnvelopeField g = nls_evolve(f, foc, 1e-3, 1.0);
        CVec expect(512);
        for (std::size_t i = 0; i < 512; ++i) expect[i] = f.A[i] * std::exp(I * 0.5);
        soliton_err = l2(g, expect);
    }
    std::vector<double> ratios;
    {
        EnvelopeField f = field(128, 20.0);
        for (std::size_t i = 0; i < 128; ++i) {
            const double x = f.grid.position(i);
            f.A[i] = 1.2 / std::cosh(x - 10.0) * std::exp(I * 0.5 * x) + 0.3;
        }
        const EnvelopeField ref = nls_evolve(f, foc, 1e-4, 1.0);
        double prev = 0.0;
        for (double dt : {0.02, 0.01, 0.005}) {
            const double e = l2(nls_evolve(f, foc, dt, 1.0), ref.A);
            if (prev > 0.0) ratios.push_back(prev / e);
            prev = e;
        }
    }
    bool ratio_ok = true;
    for (double r : ratios) ratio_ok = ratio_ok && r >= 3.5 && r <= 4.5;
    return {exact_err <= 1e-10 && soliton_err <= 1e-6 && ratio_ok,
            "exact-solution error " + fmt(exact_err, 3) + ", soliton L2 " + fmt(soliton_err, 3) + ", Strang ratios " +
                fmt(ratios[0], 4) + " " + fmt(ratios[1], 4)};
}

// ---- 8 -------------------------------------------------------------------------------------

FieldSet random_state(const Grid1D& g, std::mt19937& rng, long max_mode, double amp) {
    std::normal_distribution<double> nd;
    FieldSet u(g);
    for (int c = 0; c < 4; ++c)
        for (long j = 0; j <= max_mode; ++j) {
            const cplx z = amp * cplx(nd(rng), j == 0 ? 0.0 : nd(rng));
            u[c][g.index_of(j)] = z;
            if (j > 0) u[c][g.index_of(-j)] = std::conj(z);
        }
    return u;
}

double state_diff(const FieldSet& a, const FieldSet& b) {
    double m = 0.0;
    for (int c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < a[c].size(); ++i) m = std::max(m, std::abs(a[c][i] - b[c][i]));
    return m;
}

Outcome simulator_checks() {
    std::mt19937 rng(99);
    double lin_err = 0.0;
    {
        const Grid1D g(128, 2.0 * M_PI * 16.0 / 2.0);
        const Simulator sim(g, 0.05, Exec::serial, true);
        SimState s(random_state(g, rng, 40, 1.0), 0.0);
        const FieldSet u0 = s.u;
        sim.run(s, 0.01, 10.0);
        for (int c = 0; c < 4; ++c) {
            const CVec& lam = sim.model().linear_symbol(c);
            for (std::size_t i = 0; i < g.size(); ++i)
                lin_err = std::max(lin_err, std::abs(s.u[c][i] - u0[c][i] * std::exp(lam[i] * 10.0)));
        }
    }
    double order = 0.0;
    {
        const Grid1D g(64, 2.0 * M_PI);
        const Simulator sim(g, 0.1);
        const FieldSet u0 = random_state(g, rng, 6, 0.02);
        auto run = [&](double dt) {
            SimState s(u0, 0.0);
            sim.run(s, dt, 1.0);
            return s.u;
        };
        const FieldSet ref = run(0.05 / 32.0);
        order = std::log2(state_diff(run(0.05), ref) / state_diff(run(0.025), ref));
    }
    double mode0 = 0.0, reality = 0.0;
    {
        const Grid1D g(64, 2.0 * M_PI);
        const Simulator sim(g, 0.1);
        for (int t = 0; t < 50; ++t) {
            const FieldSet n = sim.nonlinear(random_state(g, rng, 20, 1.0));
            for (int c = 0; c < 4; ++c) mode0 = std::max(mode0, std::abs(n[c].at_mode(0)));
        }
        SimState s(random_state(g, rng, 8, 0.01), 0.0);
        sim.run(s, 0.01, 100.0, [&](const SimState& st) {
            const FieldSet n = sim.nonlinear(st.u);
            for (int c = 0; c < 4; ++c) mode0 = std::max(mode0, std::abs(n[c].at_mode(0)));
        }, 1000);
        reality = reality_defect(s.u);
    }
    const bool ok = lin_err <= 1e-10 && std::abs(order - 4.0) <= 0.3 && mode0 == 0.0 && reality <= 1e-11;
    return {ok, "linear error " + fmt(lin_err, 3) + ", dt order " + fmt(order, 4) + ", max |mode 0| " + fmt(mode0, 3) +
                    ", reality defect " + fmt(reality, 3)};
}

// ---- 9 -------------------------------------------------------------------------------------

Outcome residual_scaling() {
    ResidualScanConfig lead;
    lead.corrections = false;
    const OrderFit a = residual_scan(lead);
    ResidualScanConfig full;
    const OrderFit b = residual_scan(full);
    const bool ok = std::abs(a.order - 1.5) <= 0.3 && b.order >= 2.5;
    return {ok, "leading order " + fmt(a.order, 4) + ", second-order packet " + fmt(b.order, 4)};
}

// ---- 10 ------------------------------------------------------------------------------------

Outcome error_scan_order() {
    std::vector<double> orders;
    bool ok = true;
    std::string detail;
    for (double b : {0.0, 0.01, 0.05}) {
        ErrorScanConfig cfg;
        cfg.b = b;
        const ErrorScanResult r = error_scan(cfg);
        orders.push_back(r.order);
        ok = ok && std::isfinite(r.order) && r.order >= 1.4;
        detail += "b=" + fmt(b, 3) + ": order " + fmt(r.order, 4) + ", error/size [";
        for (const auto& row : r.rows)
            detail += " " + fmt(row.eps, 3) + ":" + (row.blew_up ? std::string("blow-up") : fmt(row.error, 3) + "/" + fmt(row.size, 3));
        detail += " ] ";
    }
    double spread = 0.0;
    for (double x : orders)
        for (double y : orders) spread = std::isfinite(x) && std::isfinite(y) ? std::max(spread, std::abs(x - y)) : NAN;
    ok = ok && std::isfinite(spread) && spread <= 0.2;
    return {ok, detail + "slope spread " + fmt(spread, 3)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "critical Bond numbers", 10.0, critical_bonds_cli},
        {2, "resonance panel classification", 10.0, panel_classification},
        {3, "k1 asymptote", 5.0, k1_asymptote},
        {4, "kernel extraction vs closed forms", 30.0, kernel_agreement},
        {5, "normal-form kernel sanity", 30.0, normal_form_sanity},
        {6, "three-wave interaction system", 30.0, twi_checks},
        {7, "NLS solver", 30.0, nls_checks},
        {8, "simulator", 120.0, simulator_checks},
        {9, "residual scaling", 120.0, residual_scaling},
        {10, "error scan order", 600.0, error_scan_order},
    };
    int passed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        passed += pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " ("
                  << fmt(secs, 3) << " s of " << fmt(c.budget_s, 3) << " s" << (in_time ? "" : ", over budget") << ")"
                  << std::endl;
    }
    std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
