#pragma once

#include <array>
#include <functional>

#include "capwave/dispersion.hpp"
#include "capwave/model.hpp"
#include "capwave/nls.hpp"

namespace capwave {

struct PacketConfig {
    double eps = 0.1;
    double k0 = 2.0;
    double b = 0.0;
    double L_xi = 80.0;          // requested envelope period; adjusted so the carrier grid nests
    std::size_t n_env = 64;      // envelope samples
    std::size_t n_carrier = 0;   // 0 selects the smallest alias-free size
    bool corrections = true;     // second harmonic and mean flow at order eps^2
};

struct WavePacket {
    double eps = 0.1;
    ModelParams params;
    NLSCoeffs nls;
    EnvelopeField A;  // envelope on the slow grid at the current slow time
    Grid1D carrier;   // L = 2 pi N0 / k0
    long N0 = 0;      // carrier mode of k0
    double L_xi = 0.0;  // effective envelope period eps * L
    bool corrections = true;
    bool truncated = false;
    double delta0 = 0.0;
};

// envelope period that nests: N0 = round(k0 L_xi / (2 pi eps))
WavePacket make_packet(const PacketConfig& cfg, const NLSCoeffs& nls);
// samples fn on the packet's slow grid
void set_envelope(WavePacket& p, const std::function<cplx(double)>& fn);
// a sech((xi - L_xi/2)/width) profile
void set_sech_envelope(WavePacket& p, double amplitude, double width);

struct SecondOrderAmplitudes {
    // per u_-1, u_1: slow-grid samples of the coefficient of E^2 and of the mean
    std::array<CVec, 2> A_m2;
    std::array<CVec, 2> A_m0;
};
SecondOrderAmplitudes second_order_corrections(const EnvelopeField& A, const NLSCoeffs& c);

// u_-1, u_1, u_-2, u_2 of eps Psi at time t, with A taken as the envelope at slow time eps^2 t
FieldSet build(const WavePacket& p, double t);
// d/dt of build, using the NLS for the slow-time derivative of A
FieldSet build_time_derivative(const WavePacket& p, double t);
// only the leading E^1 band (no second-order terms, no consistency corrections)
FieldSet build_leading(const WavePacket& p, double t);

// restrict the envelope to eps |K| <= delta0, i.e. each carrier band to |k - ell k0| <= delta0
WavePacket fourier_truncate(const WavePacket& p, double delta0);

// u_-2 and u_2 from u_-1 and u_1 through the consistency relations (quadratic order)
void fill_second_block(FieldSet& u, double b, bool with_quadratic = true);

}  // namespace capwave
