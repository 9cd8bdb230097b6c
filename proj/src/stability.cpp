#include "capwave/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capwave/resonance.hpp"
#include "capwave/twi.hpp"

namespace capwave {

StabilityVerdict stability(double k0, double b) {
    StabilityVerdict v;
    const ResonanceReport rep = find_zeros(k0, b);
    for (double z : rep.zeros)
        if (std::abs(z - k0) > 1e-9) v.resonant_k.push_back(z);
    if (v.resonant_k.empty()) {
        v.reason = "no extra resonances";
        return v;
    }
    bool by_ratio = true, by_max = true;
    for (double k1 : v.resonant_k) {
        const TWICoeffs c = twi_coeffs(k0, k1, 1, b);
        if (std::abs(c.c2) < 1e-14)
            throw std::runtime_error("stability: vanishing TWI coefficient c2 at k1 = " + std::to_string(k1));
        const double r = (c.c1 / c.c2).real();
        v.ratios.push_back(r);
        if (!(r < 0.0)) by_ratio = false;
        if (!(k0 < std::max(k1, k0 - k1))) by_max = false;
    }
    v.stable = by_ratio;
    v.characterization_agrees = by_ratio == by_max;
    v.reason = by_ratio ? "TWI ratio negative at every extra resonance" : "TWI ratio nonnegative at an extra resonance";
    return v;
}

}  // namespace capwave
