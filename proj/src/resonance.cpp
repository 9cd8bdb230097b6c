#include "capwave/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "capwave/dispersion.hpp"

namespace capwave {

namespace {

constexpr double golden = 0.6180339887498949;

// minimizer of f on [a, c]
double golden_min(const std::function<double(double)>& f, double a, double c, double tol = 1e-12) {
    double x1 = c - golden * (c - a), x2 = a + golden * (c - a);
    double f1 = f(x1), f2 = f(x2);
    while (c - a > tol * std::max(1.0, std::abs(a))) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - golden * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (c - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + c);
}

double bisect(const std::function<double(double)>& f, double a, double c, double tol) {
    double fa = f(a);
    while (c - a > tol) {
        const double m = 0.5 * (a + c);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            c = m;
        }
    }
    return 0.5 * (a + c);
}

std::vector<double> scan_points(double lo, double hi, double dk) {
    std::vector<double> ks;
    double k = lo;
    while (k < hi) {
        ks.push_back(k);
        k += k < 100.0 ? dk : std::max(dk, 1e-3 * k);
    }
    ks.push_back(hi);
    return ks;
}

// refined extremum of g near a sampled local extremum; sign = +1 for a minimum
double refine_extremum(const std::function<double(double)>& g, double a, double c, double sign) {
    return golden_min([&](double k) { return sign * g(k); }, a, c);
}

// min (sign=+1) or max (sign=-1) of g over the sampled points with golden refinement
double extreme_value(const std::function<double(double)>& g, const std::vector<double>& ks, double sign) {
    std::size_t best = 0;
    double bv = sign * g(ks[0]);
    for (std::size_t i = 1; i < ks.size(); ++i) {
        const double v = sign * g(ks[i]);
        if (v < bv) {
            bv = v;
            best = i;
        }
    }
    const double a = ks[best > 0 ? best - 1 : 0];
    const double c = ks[std::min(best + 1, ks.size() - 1)];
    if (c > a) {
        const double k = refine_extremum(g, a, c, sign);
        bv = std::min(bv, sign * g(k));
    }
    return sign * bv;
}

}  // namespace

double r_hat(double k, double b, double k0) { return omega(k, b) - omega(k - k0, b) - omega(k0, b); }

double dr_hat(double k, double b, double k0) { return omega_deriv(k, b, 1) - omega_deriv(k - k0, b, 1); }

double r_hat_reduced(double k, double b, double k0) {
    const double d = k - k0;
    if (std::abs(d) < 1e-6) {
        // omega''(0) = 0, so r'' at k0 is omega''(k0)
        return dr_hat(k0, b, k0) + 0.5 * omega_deriv(k0, b, 2) * d;
    }
    return r_hat(k, b, k0) / d;
}

std::complex<double> r_general(int j1, int j2, double k, double l, double m, double b) {
    const double s1 = j1 < 0 ? -1.0 : 1.0, s2 = j2 < 0 ? -1.0 : 1.0;
    return {0.0, s1 * omega(k, b) + omega(l, b) - s2 * omega(m, b)};
}

const char* zero_class_name(ZeroClass c) {
    switch (c) {
        case ZeroClass::only_k0: return "only_k0";
        case ZeroClass::two_zeros: return "two_zeros";
        case ZeroClass::extra_zero_pair: return "extra_zero_pair";
        case ZeroClass::tangency: return "tangency";
    }
    return "?";
}

double default_k_max(double k0, double b) {
    if (b <= 0.0) return 40.0;
    return 40.0 * std::max(1.0, 4.0 / (9.0 * k0 * b));
}

ResonanceReport find_zeros(double k0, double b) { return find_zeros(k0, b, default_k_max(k0, b)); }

ResonanceReport find_zeros(double k0, double b, double k_max, const ZeroScanOptions& opt) {
    if (!(k0 > 0.0)) throw std::invalid_argument("find_zeros: k0 must be positive");
    if (!(b >= 0.0)) throw std::invalid_argument("find_zeros: b must be nonnegative");
    if (!(k_max > k0)) throw std::invalid_argument("find_zeros: k_max must exceed k0");
    if (!(opt.dk > 0.0)) throw std::invalid_argument("find_zeros: dk must be positive");

    auto g = [&](double k) { return r_hat_reduced(k, b, k0); };
    const double tail_g = g(k_max), tail_d = dr_hat(k_max, b, k0);
    const bool settled = b > 0.0 ? (tail_g > 0.0 && tail_d > 0.0) : (tail_g < 0.0 && tail_d < 0.0);
    if (!settled)
        throw std::runtime_error("k_max too small: tail of r_hat not settled at k_max = " + std::to_string(k_max) +
                                 " (r/(k-k0) = " + std::to_string(tail_g) + ", dr/dk = " + std::to_string(tail_d) +
                                 ")");

    ResonanceReport rep;
    rep.k0 = k0;
    rep.b = b;
    rep.k_max = k_max;

    const double lo = 0.5 * k0;
    const std::vector<double> ks = scan_points(lo, k_max, opt.dk);
    std::vector<double> gs(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) gs[i] = g(ks[i]);

    std::vector<double> simple;
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        if (gs[i] == 0.0) {
            simple.push_back(ks[i]);
        } else if ((gs[i] < 0.0) != (gs[i + 1] < 0.0) && gs[i + 1] != 0.0) {
            simple.push_back(bisect(g, ks[i], ks[i + 1], opt.k_tol));
        }
    }
    if (gs.back() == 0.0) simple.push_back(ks.back());

    std::vector<double> doubles;
    if (std::abs(gs[0]) < opt.tangency_tol) doubles.push_back(lo);
    if (std::abs(g(k0)) < opt.tangency_tol) doubles.push_back(k0);
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        const double dl = gs[i] - gs[i - 1], dr = gs[i + 1] - gs[i];
        if (dl * dr > 0.0 || std::abs(gs[i]) > 1e-3) continue;
        const double sign = dl <= 0.0 ? 1.0 : -1.0;
        const double ke = refine_extremum(g, ks[i - 1], ks[i + 1], sign);
        if (std::abs(g(ke)) < opt.tangency_tol) doubles.push_back(ke);
    }
    std::sort(doubles.begin(), doubles.end());
    doubles.erase(std::unique(doubles.begin(), doubles.end(),
                              [](double a, double c) { return std::abs(a - c) < 1e-6; }),
                  doubles.end());

    const double merge = 1e-4;
    auto near_double = [&](double k) {
        return std::any_of(doubles.begin(), doubles.end(), [&](double d) { return std::abs(d - k) < merge; });
    };
    rep.zeros.push_back(k0);
    for (double z : simple)
        if (!near_double(z) && std::abs(z - k0) > merge) rep.zeros.push_back(z);
    for (double d : doubles)
        if (std::abs(d - k0) > 1e-12) rep.zeros.push_back(d);
    std::sort(rep.zeros.begin(), rep.zeros.end());
    rep.double_zeros = doubles;

    bool above = false, below = false;
    for (double z : rep.zeros) {
        if (z > k0) above = true;
        if (z < k0) below = true;
    }
    if (!doubles.empty())
        rep.classification = ZeroClass::tangency;
    else if (above)
        rep.classification = ZeroClass::two_zeros;
    else if (below)
        rep.classification = ZeroClass::extra_zero_pair;
    else
        rep.classification = ZeroClass::only_k0;
    if (above) rep.k1 = rep.zeros.back();
    return rep;
}

CriticalBonds critical_bonds(double k0, Exec exec) {
    if (!(k0 > 0.0)) throw std::invalid_argument("critical_bonds: k0 must be positive");
    const double dk = 0.01;

    // smallest value of r/(k-k0) on [k0/2, K]; a zero beyond k0/2 exists iff it is <= 0
    auto min_g = [&](double b) {
        auto g = [&](double k) { return r_hat_reduced(k, b, k0); };
        return extreme_value(g, scan_points(0.5 * k0, default_k_max(k0, b), dk), 1.0);
    };
    // largest value on [k0/2, k0]; a zero there exists iff it is >= 0
    auto max_g_left = [&](double b) {
        auto g = [&](double k) { return r_hat_reduced(k, b, k0); };
        return std::max(extreme_value(g, scan_points(0.5 * k0, k0, dk * 0.5), -1.0), g(k0));
    };

    const double db = 1e-3;
    const int nb = static_cast<int>(std::floor((1.0 / 3.0) / db));
    std::vector<double> bs(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) bs[static_cast<std::size_t>(i)] = 1.0 / 3.0 - db * i;
    std::vector<double> vmin(bs.size()), vmax(bs.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < nb; ++i) {
            vmin[static_cast<std::size_t>(i)] = min_g(bs[static_cast<std::size_t>(i)]);
            vmax[static_cast<std::size_t>(i)] = max_g_left(bs[static_cast<std::size_t>(i)]);
        }
    } else {
        for (std::size_t i = 0; i < bs.size(); ++i) {
            vmin[i] = min_g(bs[i]);
            vmax[i] = max_g_left(bs[i]);
        }
    }

    std::string trace;
    auto trace_msg = [&](const char* what) {
        std::string s = std::string("critical_bonds: bracketing failed for ") + what + " at k0 = " +
                        std::to_string(k0) + "; scan trace (b, min g, max g on [k0/2,k0]):";
        for (std::size_t i = 0; i < bs.size(); i += 20)
            s += " (" + std::to_string(bs[i]) + ", " + std::to_string(vmin[i]) + ", " + std::to_string(vmax[i]) + ")";
        return s;
    };

    if (vmin[0] <= 0.0) throw std::runtime_error(trace_msg("b1 (extra zero at b = 1/3)"));
    std::size_t i1 = 1;
    while (i1 < bs.size() && vmin[i1] > 0.0) ++i1;
    if (i1 == bs.size()) throw std::runtime_error(trace_msg("b1"));
    double lo = bs[i1], hi = bs[i1 - 1];  // min_g(lo) <= 0 < min_g(hi)
    while (hi - lo > 1e-14) {
        const double m = 0.5 * (lo + hi);
        (min_g(m) <= 0.0 ? lo : hi) = m;
    }
    CriticalBonds cb;
    cb.b1 = 0.5 * (lo + hi);

    std::size_t i0 = bs.size();
    while (i0 > 0 && vmax[i0 - 1] < 0.0) --i0;
    if (i0 == 0 || i0 == bs.size()) throw std::runtime_error(trace_msg("b0"));
    lo = bs[i0];      // max_g_left(lo) < 0
    hi = bs[i0 - 1];  // max_g_left(hi) >= 0
    while (hi - lo > 1e-14) {
        const double m = 0.5 * (lo + hi);
        (max_g_left(m) >= 0.0 ? hi : lo) = m;
    }
    cb.b0 = 0.5 * (lo + hi);
    if (!(cb.b0 > 0.0 && cb.b0 < cb.b1 && cb.b1 < 1.0 / 3.0))
        throw std::runtime_error("critical_bonds: inconsistent result b0 = " + std::to_string(cb.b0) +
                                 ", b1 = " + std::to_string(cb.b1));
    return cb;
}

const CriticalBonds& critical_bonds_cached(double k0) {
    static std::map<double, CriticalBonds> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k0);
        if (it != cache.end()) return it->second;
    }
    const CriticalBonds cb = critical_bonds(k0);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(k0, cb).first->second;
}

double k1_of_b(double k0, double b) {
    const CriticalBonds& cb = critical_bonds_cached(k0);
    if (!(b > 0.0 && b < cb.b0))
        throw std::domain_error("k1_of_b: b = " + std::to_string(b) + " outside (0, b0) with b0 = " +
                                std::to_string(cb.b0));
    const ResonanceReport rep = find_zeros(k0, b);
    if (!rep.k1) throw std::runtime_error("k1_of_b: no zero above k0 found");
    return *rep.k1;
}

InflectionPoints inflection_points(double b) {
    if (!(b > 0.0 && b < 1.0 / 3.0))
        throw std::domain_error("inflection_points: omega'' has no zero unless 0 < b < 1/3");
    auto first_sign_change = [](const std::function<double(double)>& f, double k) {
        double fk = f(k);
        while (k < 1e6) {
            const double kn = k * 1.01 + 1e-3;
            const double fn = f(kn);
            if ((fn < 0.0) != (fk < 0.0)) return bisect(f, k, kn, 1e-13);
            k = kn;
            fk = fn;
        }
        throw std::runtime_error("inflection_points: no sign change found");
    };
    InflectionPoints p;
    p.k3 = first_sign_change([b](double k) { return omega_deriv(k, b, 2); }, 1e-3);
    p.k4 = first_sign_change([b](double k) { return omega_deriv(k, b, 3); }, p.k3);
    return p;
}

NonresonanceReport nonresonance_check(double k0, double b, int M, double tol) {
    const ModelParams p(k0, b);
    NonresonanceReport rep;
    rep.margin = std::abs(p.cg - omega_deriv(0.0, b, 1));
    auto check = [&](double value, const std::string& reason) {
        rep.margin = std::min(rep.margin, std::abs(value));
        if (std::abs(value) < tol) {
            rep.ok = false;
            rep.reasons.push_back(reason);
        }
    };
    check(p.cg - omega_deriv(0.0, b, 1), "group_velocity_matches_long_wave_speed");
    check(p.omega2, "vanishing_dispersion");
    for (int m = 2; m < M; ++m) {
        const double wm = omega(m * k0, b);
        const std::string name = m == 2 ? "second_harmonic_resonance" : "harmonic_resonance_" + std::to_string(m);
        check(wm - m * p.omega0, name);
        check(wm + m * p.omega0, name);
    }
    return rep;
}

}  // namespace capwave
