#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "capwave/dispersion.hpp"
#include "capwave/io.hpp"
#include "capwave/kernels.hpp"
#include "capwave/nls.hpp"
#include "capwave/resonance.hpp"
#include "capwave/sim.hpp"
#include "capwave/stability.hpp"
#include "capwave/twi.hpp"
#include "capwave/wavepacket.hpp"

namespace fs = std::filesystem;
using namespace capwave;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

// Config files are JSON objects nested by subcommand, e.g. {"sim": {"run": {"eps": 0.1}}}.
class ConfigJSON : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return collect(app, default_also).dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        Json j;
        try {
            j = Json::parse(input);
        } catch (const std::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static Json scalar(const std::string& s) {
        if (s == "true") return true;
        if (s == "false") return false;
        char* end = nullptr;
        const long long i = std::strtoll(s.c_str(), &end, 10);
        if (!s.empty() && end == s.c_str() + s.size()) return i;
        const double v = std::strtod(s.c_str(), &end);
        if (!s.empty() && end == s.c_str() + s.size()) return v;
        return s;
    }

    static Json collect(const CLI::App* app, bool default_also) {
        Json j = Json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
            const std::string name = opt->get_lnames().front();
            if (name == "help" || name == "config") continue;
            std::vector<std::string> vals = opt->results();
            if (vals.empty()) {
                if (!default_also || opt->get_default_str().empty()) {
                    if (opt->get_type_size() == 0 && default_also) j[name] = false;
                    continue;
                }
                vals = {opt->get_default_str()};
            }
            if (opt->get_type_size() == 0) {
                j[name] = opt->count() > 0;
            } else if (opt->get_items_expected_max() > 1) {
                Json arr = Json::array();
                for (const auto& v : vals) {
                    std::string s = v;
                    if (s.size() > 1 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
                    std::stringstream ss(s);
                    for (std::string part; std::getline(ss, part, ',');) arr.push_back(scalar(part));
                }
                j[name] = arr;
            } else {
                j[name] = scalar(vals.front());
            }
        }
        for (const CLI::App* sub : app->get_subcommands()) j[sub->get_name()] = collect(sub, default_also);
        return j;
    }

    static void flatten(const Json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        for (const auto& [key, val] : j.items()) {
            if (val.is_object()) {
                auto p = parents;
                p.push_back(key);
                flatten(val, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            auto str = [](const Json& v) {
                if (v.is_string()) return v.get<std::string>();
                if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
                if (v.is_number_float()) return format_double(v.get<double>());
                return v.dump();
            };
            if (val.is_array())
                for (const auto& v : val) item.inputs.push_back(str(v));
            else
                item.inputs.push_back(str(val));
            out.push_back(item);
        }
    }
};

struct Globals {
    std::string output_dir;
    bool emit_plot_data = false;
    bool parallel = false;
};

Exec exec_of(const Globals& g) { return g.parallel ? Exec::parallel : Exec::serial; }

void print_kv(const std::string& key, double v) { std::cout << key << '=' << format_double(v) << '\n'; }

// resonance panels at k0: the nine reference Bond numbers in display order
std::vector<std::pair<std::string, double>> panel_bonds(double k0) {
    const CriticalBonds cb = critical_bonds_cached(k0);
    return {{"1/3", 1.0 / 3.0},    {"1/3.5", 1.0 / 3.5}, {"1/4.15", 1.0 / 4.15},
            {"b1", cb.b1},         {"1/4.25", 1.0 / 4.25}, {"b0", cb.b0},
            {"1/5", 1.0 / 5.0},    {"1/200", 1.0 / 200.0}, {"0", 0.0}};
}

Json fieldset_norms(const FieldSet& u) {
    Json j;
    for (int c = 0; c < 4; ++c) j[comp_name(c)] = l2_norm(u[c]);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* t = std::getenv("CAPWAVE_NUM_THREADS")) {
        const int n = std::atoi(t);
        if (n > 0) omp_set_num_threads(n);
    }

    CLI::App app{"capillary-gravity wave packet toolkit"};
    app.config_formatter(std::make_shared<ConfigJSON>());
    app.set_config("--config", "", "JSON config file; command-line flags override its values");
    app.require_subcommand(1);
    Globals g;
    app.add_option("--output-dir", g.output_dir, "directory for run files (nothing is written when empty)");
    app.add_flag("--emit-plot-data", g.emit_plot_data, "write per-figure CSV data");
    app.add_flag("--parallel", g.parallel, "use the OpenMP kernels");

    // dispersion
    auto* disp = app.add_subcommand("dispersion", "tabulate omega and its derivatives");
    double d_b = 0.0, d_kmin = 0.0, d_kmax = 10.0;
    int d_n = 101;
    disp->add_option("--b", d_b, "Bond number")->check(CLI::NonNegativeNumber)->capture_default_str();
    disp->add_option("--k-min", d_kmin)->capture_default_str();
    disp->add_option("--k-max", d_kmax)->capture_default_str();
    disp->add_option("--n", d_n, "number of samples")->check(CLI::Range(2, 1000000))->capture_default_str();

    // resonance
    auto* res = app.add_subcommand("resonance", "zeros of the resonance function");
    res->require_subcommand(1);
    auto* res_scan = res->add_subcommand("scan", "zeros and their classification");
    double rs_k0 = 0.0, rs_b = 0.0, rs_kmax = 0.0;
    res_scan->add_option("--k0", rs_k0)->required()->check(CLI::PositiveNumber);
    res_scan->add_option("--b", rs_b)->check(CLI::NonNegativeNumber)->capture_default_str();
    res_scan->add_option("--k-max", rs_kmax, "0 selects the default bound")->capture_default_str();
    auto* res_crit = res->add_subcommand("critical", "critical Bond numbers b0 and b1");
    double rc_k0 = 0.0;
    res_crit->add_option("--k0", rc_k0)->required()->check(CLI::PositiveNumber);
    auto* res_stab = res->add_subcommand("stability", "stability of the NLS subspace");
    double rst_k0 = 0.0, rst_b = 0.0;
    res_stab->add_option("--k0", rst_k0)->required()->check(CLI::PositiveNumber);
    res_stab->add_option("--b", rst_b)->required()->check(CLI::NonNegativeNumber);

    // kernels
    auto* ker = app.add_subcommand("kernels", "weights and normal-form kernels");
    ker->require_subcommand(1);
    auto* ker_dump = ker->add_subcommand("dump", "tabulate theta, rho and n_hat");
    double kd_k0 = 0.0, kd_b = 0.0, kd_eps = 0.1, kd_kmin = -10.0, kd_kmax = 10.0;
    int kd_n = 401;
    ker_dump->add_option("--k0", kd_k0)->required()->check(CLI::PositiveNumber);
    ker_dump->add_option("--b", kd_b)->check(CLI::NonNegativeNumber)->capture_default_str();
    ker_dump->add_option("--eps", kd_eps)->check(CLI::Range(1e-6, 0.999))->capture_default_str();
    ker_dump->add_option("--k-min", kd_kmin)->capture_default_str();
    ker_dump->add_option("--k-max", kd_kmax)->capture_default_str();
    ker_dump->add_option("--n", kd_n)->check(CLI::Range(2, 1000000))->capture_default_str();

    // twi
    auto* twi = app.add_subcommand("twi", "three-wave interaction system");
    twi->require_subcommand(1);
    auto* twi_run = twi->add_subcommand("run", "integrate the TWI system");
    double tw_k0 = 0.0, tw_b = 0.0, tw_k1 = 0.0, tw_tau = 50.0, tw_dt = 0.0, tw_a0 = 1.0, tw_a1 = 1e-4,
           tw_a2 = 1e-4;
    int tw_ell = 1;
    bool tw_extracted = false;
    twi_run->add_option("--k0", tw_k0)->required()->check(CLI::PositiveNumber);
    twi_run->add_option("--b", tw_b)->required()->check(CLI::NonNegativeNumber);
    twi_run->add_option("--k1", tw_k1, "0 selects the extra resonance k1(b)")->capture_default_str();
    twi_run->add_option("--ell", tw_ell)->check(CLI::Range(1, 6))->capture_default_str();
    twi_run->add_option("--tau-end", tw_tau)->check(CLI::NonNegativeNumber)->capture_default_str();
    twi_run->add_option("--dt", tw_dt, "0 selects a step from the amplitudes")->capture_default_str();
    twi_run->add_option("--a0", tw_a0)->capture_default_str();
    twi_run->add_option("--a1", tw_a1)->capture_default_str();
    twi_run->add_option("--a2", tw_a2)->capture_default_str();
    twi_run->add_flag("--extracted", tw_extracted, "coefficients from the pseudo-spectral model");

    // nls
    auto* nls = app.add_subcommand("nls", "envelope equation");
    nls->require_subcommand(1);
    auto* nls_run = nls->add_subcommand("run", "split-step integration from a sech profile");
    double nl_k0 = 0.0, nl_b = 0.0, nl_L = 80.0, nl_tau = 1.0, nl_dtau = 1e-3, nl_amp = 1.0, nl_width = 3.0;
    std::optional<double> nl_nu;
    int nl_n = 256;
    nls_run->add_option("--k0", nl_k0)->required()->check(CLI::PositiveNumber);
    nls_run->add_option("--b", nl_b)->check(CLI::NonNegativeNumber)->capture_default_str();
    nls_run->add_option("--nu", nl_nu, "user-supplied cubic coefficient");
    nls_run->add_option("--n", nl_n)->check(CLI::Range(8, 1 << 22))->capture_default_str();
    nls_run->add_option("--L", nl_L)->check(CLI::PositiveNumber)->capture_default_str();
    nls_run->add_option("--tau-end", nl_tau)->check(CLI::NonNegativeNumber)->capture_default_str();
    nls_run->add_option("--dtau", nl_dtau)->check(CLI::PositiveNumber)->capture_default_str();
    nls_run->add_option("--amp", nl_amp)->capture_default_str();
    nls_run->add_option("--width", nl_width)->check(CLI::PositiveNumber)->capture_default_str();

    // wavepacket
    auto* wp = app.add_subcommand("wavepacket", "modulated carrier approximation");
    wp->require_subcommand(1);
    auto* wp_build = wp->add_subcommand("build", "assemble eps Psi on the carrier grid");
    PacketConfig wpc;
    double wp_t = 0.0, wp_amp = 1.0, wp_width = 3.0;
    bool wp_leading = false;
    wp_build->add_option("--eps", wpc.eps)->check(CLI::Range(1e-6, 0.999))->capture_default_str();
    wp_build->add_option("--k0", wpc.k0)->required()->check(CLI::PositiveNumber);
    wp_build->add_option("--b", wpc.b)->check(CLI::NonNegativeNumber)->capture_default_str();
    wp_build->add_option("--L-xi", wpc.L_xi)->check(CLI::PositiveNumber)->capture_default_str();
    wp_build->add_option("--n-env", wpc.n_env)->capture_default_str();
    wp_build->add_option("--t", wp_t)->capture_default_str();
    wp_build->add_option("--amp", wp_amp)->capture_default_str();
    wp_build->add_option("--width", wp_width)->check(CLI::PositiveNumber)->capture_default_str();
    wp_build->add_flag("--leading", wp_leading, "omit the second-order terms");

    // sim
    auto* sim = app.add_subcommand("sim", "quadratic-truncated model");
    sim->require_subcommand(1);
    auto* sim_run = sim->add_subcommand("run", "evolve packet initial data");
    PacketConfig spc;
    double sr_dt = 0.05, sr_tend = 1.0, sr_amp = 1.0, sr_width = 3.0;
    long sr_stride = 10;
    bool sr_linear = false;
    sim_run->add_option("--eps", spc.eps)->check(CLI::Range(1e-6, 0.999))->capture_default_str();
    sim_run->add_option("--k0", spc.k0)->required()->check(CLI::PositiveNumber);
    sim_run->add_option("--b", spc.b)->check(CLI::NonNegativeNumber)->capture_default_str();
    sim_run->add_option("--L-xi", spc.L_xi)->check(CLI::PositiveNumber)->capture_default_str();
    sim_run->add_option("--n-env", spc.n_env)->capture_default_str();
    sim_run->add_option("--n", spc.n_carrier, "carrier grid size, 0 for automatic")->capture_default_str();
    sim_run->add_option("--dt", sr_dt)->check(CLI::PositiveNumber)->capture_default_str();
    sim_run->add_option("--t-end", sr_tend)->check(CLI::NonNegativeNumber)->capture_default_str();
    sim_run->add_option("--stride", sr_stride)->check(CLI::PositiveNumber)->capture_default_str();
    sim_run->add_option("--amp", sr_amp)->capture_default_str();
    sim_run->add_option("--width", sr_width)->check(CLI::PositiveNumber)->capture_default_str();
    sim_run->add_flag("--linear-only", sr_linear, "drop the quadratic terms");

    auto* sim_err = sim->add_subcommand("error-scan", "approximation error against eps");
    ErrorScanConfig ec;
    std::string ec_horizon = "eps2";
    sim_err->add_option("--k0", ec.k0)->required()->check(CLI::PositiveNumber);
    sim_err->add_option("--b", ec.b)->check(CLI::NonNegativeNumber)->capture_default_str();
    sim_err->add_option("--eps", ec.eps)->capture_default_str();
    sim_err->add_option("--tau0", ec.tau0)->check(CLI::PositiveNumber)->capture_default_str();
    sim_err->add_option("--horizon", ec_horizon, "eps (tau0/eps) or eps2 (tau0/eps^2)")
        ->check(CLI::IsMember({"eps", "eps2"}))
        ->capture_default_str();
    sim_err->add_option("--dt", ec.dt, "0 selects 0.05")->check(CLI::NonNegativeNumber)->capture_default_str();
    sim_err->add_option("--samples", ec.samples)->check(CLI::PositiveNumber)->capture_default_str();
    sim_err->add_option("--amp", ec.amplitude)->capture_default_str();
    sim_err->add_option("--L-xi", ec.L_xi)->check(CLI::PositiveNumber)->capture_default_str();

    auto* sim_res = sim->add_subcommand("residual-scan", "residual of the packet against eps");
    ResidualScanConfig rc;
    bool rc_leading = false;
    sim_res->add_option("--k0", rc.k0)->required()->check(CLI::PositiveNumber);
    sim_res->add_option("--b", rc.b)->check(CLI::NonNegativeNumber)->capture_default_str();
    sim_res->add_option("--eps", rc.eps)->capture_default_str();
    sim_res->add_option("--amp", rc.amplitude)->capture_default_str();
    sim_res->add_option("--L-xi", rc.L_xi)->check(CLI::PositiveNumber)->capture_default_str();
    sim_res->add_flag("--leading", rc_leading, "leading-order packet only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    const auto t_start = std::chrono::steady_clock::now();
    const fs::path out = g.output_dir;
    const bool write = !g.output_dir.empty();
    Json metrics = Json::object();

    try {
        if (*disp) {
            CsvTable t{{"k", "omega", "omega_1", "omega_2", "sigma"}, {}};
            for (int i = 0; i < d_n; ++i) {
                const double k = d_kmin + (d_kmax - d_kmin) * i / (d_n - 1);
                t.rows.push_back({k, omega(k, d_b), omega_deriv(k, d_b, 1), omega_deriv(k, d_b, 2), sigma(k, d_b)});
            }
            std::cout << "k,omega,omega_1,omega_2,sigma\n";
            for (const auto& r : t.rows) {
                for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << format_double(r[i]);
                std::cout << '\n';
            }
            if (write) write_csv(out / "dispersion.csv", t);
        } else if (*res_scan) {
            const ResonanceReport rep = rs_kmax > 0.0 ? find_zeros(rs_k0, rs_b, rs_kmax) : find_zeros(rs_k0, rs_b);
            std::cout << "classification=" << zero_class_name(rep.classification) << '\n';
            std::cout << "zeros=" << rep.zeros.size() << '\n';
            for (double z : rep.zeros) print_kv("k", z);
            if (rep.k1) print_kv("k1", *rep.k1);
            metrics["classification"] = zero_class_name(rep.classification);
            metrics["zeros"] = rep.zeros;
            metrics["double_zeros"] = rep.double_zeros;
            if (write) {
                CsvTable t{{"k", "double"}, {}};
                for (double z : rep.zeros) {
                    bool dbl = false;
                    for (double d : rep.double_zeros) dbl = dbl || std::abs(d - z) < 1e-9;
                    t.rows.push_back({z, dbl ? 1.0 : 0.0});
                }
                write_csv(out / "zeros.csv", t);
            }
            if (g.emit_plot_data) {
                const fs::path dir = write ? out : fs::path(".");
                int idx = 1;
                for (const auto& [label, b] : panel_bonds(rs_k0)) {
                    CsvTable t{{"k", "r_hat"}, {}};
                    for (int i = 0; i <= 5900; ++i) {
                        const double k = 1.0 + 0.01 * i;
                        t.rows.push_back({k, r_hat(k, b, rs_k0)});
                    }
                    write_csv(dir / ("resonance_panel_" + std::to_string(idx++) + ".csv"), t);
                }
            }
        } else if (*res_crit) {
            const CriticalBonds cb = critical_bonds(rc_k0, exec_of(g));
            char buf[64];
            std::snprintf(buf, sizeof buf, "b0=%.10f", cb.b0);
            std::cout << buf << '\n';
            std::snprintf(buf, sizeof buf, "b1=%.10f", cb.b1);
            std::cout << buf << '\n';
            metrics["b0"] = cb.b0;
            metrics["b1"] = cb.b1;
        } else if (*res_stab) {
            const StabilityVerdict v = stability(rst_k0, rst_b);
            std::cout << "stable=" << (v.stable ? "true" : "false") << '\n';
            for (std::size_t i = 0; i < v.ratios.size(); ++i) {
                print_kv("k1", v.resonant_k[i]);
                print_kv("ratio", v.ratios[i]);
            }
            std::cout << "characterization_agrees=" << (v.characterization_agrees ? "true" : "false") << '\n';
            std::cout << "reason=" << v.reason << '\n';
            metrics["stable"] = v.stable;
            metrics["ratios"] = v.ratios;
            metrics["resonant_k"] = v.resonant_k;
            metrics["characterization_agrees"] = v.characterization_agrees;
        } else if (*ker_dump) {
            const KernelParams kp = make_kernel_params(kd_k0, kd_b, kd_eps);
            print_kv("delta0", kp.delta0);
            print_kv("delta1", kp.delta1);
            if (kp.k1) print_kv("k1", *kp.k1);
            CsvTable t{{"k", "theta", "rho_m1_l2", "n_hat_re", "n_hat_im"}, {}};
            for (int i = 0; i < kd_n; ++i) {
                const double k = kd_kmin + (kd_kmax - kd_kmin) * i / std::max(1, kd_n - 1);
                const cplx n = n_hat(-1, -1, 1, 1, k, kp);
                t.rows.push_back({k, theta_hat(k, kd_eps, kp.delta0), rho_hat(-1, 2, k, kp), n.real(), n.imag()});
            }
            metrics["delta0"] = kp.delta0;
            metrics["delta1"] = kp.delta1;
            if (write) write_csv(out / "kernels.csv", t);
        } else if (*twi_run) {
            const double k1 = tw_k1 > 0.0 ? tw_k1 : k1_of_b(tw_k0, tw_b);
            const TWICoeffs c = tw_extracted ? twi_coeffs_extracted(tw_k0, k1, tw_ell, tw_b)
                                             : twi_coeffs(tw_k0, k1, tw_ell, tw_b);
            if (!c.warning.empty()) std::cerr << "warning: " << c.warning << '\n';
            const TWIState s0{tw_a0, tw_a1, tw_a2, 0.0};
            const double dt = tw_dt > 0.0 ? tw_dt : default_dt(s0, c);
            const TWITrajectory tr = integrate(s0, c, dt, tw_tau, 10);
            const double E0 = tr.samples.front().E;
            double drift = 0.0;
            for (const auto& sm : tr.samples) drift = std::max(drift, std::abs(sm.E - E0));
            const double ratio = (c.c1 / c.c2).real();
            print_kv("k1", c.k1);
            print_kv("c1_over_c2", ratio);
            std::cout << "stable=" << (ratio < 0.0 ? "true" : "false") << '\n';
            print_kv("E_drift", drift);
            std::cout << "blew_up=" << (tr.blew_up ? "true" : "false") << '\n';
            metrics["k1"] = c.k1;
            metrics["c1_over_c2"] = ratio;
            metrics["E_drift"] = drift;
            metrics["blew_up"] = tr.blew_up;
            if (write) {
                CsvTable t{{"tau", "A0_re", "A0_im", "A1_re", "A1_im", "A2_re", "A2_im", "E"}, {}};
                for (const auto& sm : tr.samples)
                    t.rows.push_back({sm.tau, sm.A0.real(), sm.A0.imag(), sm.A1.real(), sm.A1.imag(), sm.A2.real(),
                                      sm.A2.imag(), sm.E});
                write_csv(out / "twi.csv", t);
            }
            if (tr.blew_up) throw std::runtime_error("twi: amplitudes exceeded the blow-up bound");
        } else if (*nls_run) {
            const NLSCoeffs c = nl_nu ? nls_coefficients_user(nl_k0, nl_b, *nl_nu) : nls_coefficients(nl_k0, nl_b);
            EnvelopeField A{Grid1D(static_cast<std::size_t>(nl_n), nl_L), CVec(static_cast<std::size_t>(nl_n)), 0.0};
            for (std::size_t i = 0; i < A.A.size(); ++i)
                A.A[i] = nl_amp / std::cosh((A.grid.position(i) - 0.5 * nl_L) / nl_width);
            const double m0 = envelope_mass(A);
            const EnvelopeField F = nls_evolve(A, c, nl_dtau, nl_tau);
            print_kv("half_omega2", c.half_omega2);
            print_kv("nu", c.nu);
            std::cout << "nu_provenance=" << provenance_name(c.provenance) << '\n';
            print_kv("mass_drift", std::abs(envelope_mass(F) - m0));
            metrics["half_omega2"] = c.half_omega2;
            metrics["nu"] = c.nu;
            metrics["nu_provenance"] = provenance_name(c.provenance);
            metrics["mass_drift"] = std::abs(envelope_mass(F) - m0);
            if (write) {
                CsvTable t{{"xi", "re", "im"}, {}};
                for (std::size_t i = 0; i < F.A.size(); ++i)
                    t.rows.push_back({F.grid.position(i), F.A[i].real(), F.A[i].imag()});
                write_csv(out / "envelope.csv", t);
                write_binary(out / "envelope.bin", F.A);
            }
        } else if (*wp_build) {
            const NLSCoeffs c = nls_coefficients(wpc.k0, wpc.b);
            wpc.corrections = !wp_leading;
            WavePacket p = make_packet(wpc, c);
            set_sech_envelope(p, wp_amp, wp_width);
            const FieldSet u = build(p, wp_t);
            const TruncatedModel model(p.carrier, wpc.b, exec_of(g));
            const ResidualNorms r = residual(model, p, wp_t);
            std::cout << "carrier_points=" << p.carrier.size() << '\n';
            std::cout << "carrier_mode=" << p.N0 << '\n';
            print_kv("L_xi", p.L_xi);
            print_kv("residual", r.total);
            metrics["carrier_points"] = p.carrier.size();
            metrics["carrier_mode"] = p.N0;
            metrics["L_xi"] = p.L_xi;
            metrics["residual"] = r.total;
            metrics["residual_components"] = r.comp;
            metrics["norms"] = fieldset_norms(u);
            if (write)
                for (int comp = 0; comp < 4; ++comp)
                    write_binary(out / (std::string("field_") + comp_name(comp) + ".bin"), u[comp].coeffs);
        } else if (*sim_run) {
            const NLSCoeffs c = nls_coefficients(spc.k0, spc.b);
            WavePacket p = make_packet(spc, c);
            set_sech_envelope(p, sr_amp, sr_width);
            const Simulator s(p.carrier, spc.b, exec_of(g), sr_linear);
            SimState st(build(p, 0.0), 0.0);
            CsvTable t{{"t", "l2_m1", "l2_p1", "l2_m2", "l2_p2", "reality_defect"}, {}};
            auto record = [&](const SimState& x) {
                t.rows.push_back({x.t, l2_norm(x.u[m1]), l2_norm(x.u[p1]), l2_norm(x.u[m2]), l2_norm(x.u[p2]),
                                  reality_defect(x.u)});
            };
            record(st);
            s.run(st, sr_dt, sr_tend, record, sr_stride);
            const ConsistencyDefect cd = consistency_residual(st.u, spc.b);
            std::cout << "steps=" << st.step << '\n';
            print_kv("t", st.t);
            print_kv("consistency_first", cd.first);
            print_kv("consistency_second", cd.second);
            metrics["model"] = "quadratic-truncated diagonalized model";
            metrics["steps"] = st.step;
            metrics["t"] = st.t;
            metrics["norms"] = fieldset_norms(st.u);
            metrics["consistency"] = {cd.first, cd.second};
            if (write) {
                write_csv(out / "snapshots.csv", t);
                for (int comp = 0; comp < 4; ++comp)
                    write_binary(out / (std::string("state_") + comp_name(comp) + ".bin"), st.u[comp].coeffs);
            }
        } else if (*sim_err) {
            ec.horizon = ec_horizon == "eps" ? Horizon::tau0_over_eps : Horizon::tau0_over_eps2;
            ec.exec = exec_of(g);
            const ErrorScanResult r = error_scan(ec);
            CsvTable t{{"eps", "error", "size", "t_end", "steps", "flagged"}, {}};
            Json rows = Json::array();
            for (const auto& row : r.rows) {
                t.rows.push_back({row.eps, row.error, row.size, row.t_end, static_cast<double>(row.steps),
                                  row.flagged ? 1.0 : 0.0});
                std::cout << "eps=" << format_double(row.eps) << " error=" << format_double(row.error)
                          << (row.flagged ? " flagged" : "") << (row.blew_up ? " blew_up" : "") << '\n';
                rows.push_back({{"eps", row.eps},
                                {"error", std::isfinite(row.error) ? Json(row.error) : Json("inf")},
                                {"flagged", row.flagged},
                                {"blew_up", row.blew_up}});
            }
            print_kv("order", r.order);
            print_kv("nu", r.nu);
            metrics["model"] = "quadratic-truncated diagonalized model";
            metrics["order"] = std::isfinite(r.order) ? Json(r.order) : Json(nullptr);
            metrics["nu"] = r.nu;
            metrics["monotone"] = r.monotone;
            metrics["rows"] = rows;
            if (write) write_csv(out / "errors.csv", t);
        } else if (*sim_res) {
            rc.corrections = !rc_leading;
            const OrderFit f = residual_scan(rc, exec_of(g));
            for (std::size_t i = 0; i < f.eps.size(); ++i)
                std::cout << "eps=" << format_double(f.eps[i]) << " residual=" << format_double(f.values[i]) << '\n';
            print_kv("order", f.order);
            metrics["order"] = f.order;
            metrics["eps"] = f.eps;
            metrics["residual"] = f.values;
            if (write) {
                CsvTable t{{"eps", "residual"}, {}};
                for (std::size_t i = 0; i < f.eps.size(); ++i) t.rows.push_back({f.eps[i], f.values[i]});
                write_csv(out / "residuals.csv", t);
            }
        }
    } catch (const NonresonanceError& e) {
        std::cerr << "error: nonresonance condition failed (" << e.reason() << "): " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }

    if (write) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        Json config = Json::parse(app.config_to_str(true, false));
        // where the files go is not part of what the run computes
        config.erase("output-dir");
        write_run_files(out, config, wall);
        write_json(out / "metrics.json", metrics);
    }
    return 0;
}
