#pragma once

#include <string>
#include <vector>

namespace capwave {

struct StabilityVerdict {
    bool stable = true;
    // c1/c2 of the triad at each extra resonance (empty when there is none)
    std::vector<double> ratios;
    std::vector<double> resonant_k;
    bool characterization_agrees = true;  // against k0 < max{k1, k0 - k1}
    std::string reason;
};

StabilityVerdict stability(double k0, double b);

}  // namespace capwave
