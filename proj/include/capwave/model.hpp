#pragma once

#include <array>
#include <string>

#include "capwave/spectral.hpp"

namespace capwave {

// Component order everywhere: u_-1, u_1, u_-2, u_2.
enum Comp : int { m1 = 0, p1 = 1, m2 = 2, p2 = 3 };
constexpr std::array<int, 4> comp_sign{-1, 1, -1, 1};
int comp_from_index(int j);  // j in {-1, 1, -2, 2}
int index_from_comp(int c);
const char* comp_name(int c);

struct FieldSet {
    std::array<SpectralField, 4> u;

    explicit FieldSet(const Grid1D& g) : u{SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g)} {}
    SpectralField& operator[](int c) { return u[static_cast<std::size_t>(c)]; }
    const SpectralField& operator[](int c) const { return u[static_cast<std::size_t>(c)]; }
    const Grid1D& grid() const { return u[0].grid; }
};

FieldSet operator+(const FieldSet& a, const FieldSet& b);
FieldSet operator-(const FieldSet& a, const FieldSet& b);
FieldSet operator*(double s, const FieldSet& a);
void axpy(FieldSet& y, double a, const FieldSet& x);

// One contribution per quadratic term of the truncated system; the first factor
// of each product is taken from U and the second from V.
struct TermFields {
    static constexpr int count = 15;
    enum Id : int { A1, A2, A3, A4, B1m, B1p, B2, B3, B4, B5, B6, B7, B8, B9, B10 };
    std::array<SpectralField, count> t;
    explicit TermFields(const Grid1D& g);
    static const char* name(int id);
};

// Weight of term `id` in equation `comp`.
double term_weight(int comp, int id, double b);

// Quadratic-truncated diagonalized capillary-gravity system in arc-length coordinates.
class TruncatedModel {
public:
    TruncatedModel(const Grid1D& grid, double b, Exec exec = Exec::serial);

    const Grid1D& grid() const { return grid_; }
    double bond() const { return b_; }
    Exec exec() const { return exec_; }
    void set_exec(Exec e) { exec_ = e; }

    // -i omega(k) for minus components, +i omega(k) for plus components
    const CVec& linear_symbol(int comp) const { return comp_sign[comp] < 0 ? lin_minus_ : lin_plus_; }

    TermFields terms(const FieldSet& U, const FieldSet& V) const;
    FieldSet combine(const TermFields& tf) const;
    FieldSet bilinear(const FieldSet& U, const FieldSet& V) const { return combine(terms(U, V)); }
    FieldSet nonlinearity(const FieldSet& U) const;
    FieldSet linear(const FieldSet& U) const;
    FieldSet rhs(const FieldSet& U) const;

    const Multiplier& sigma() const { return sigma_; }
    const Multiplier& sigma_inv() const { return sigma_inv_; }
    const Multiplier& k0() const { return k0_; }

private:
    Grid1D grid_;
    double b_;
    Exec exec_;
    Multiplier sigma_, sigma_inv_, k0_, sigma_k0_, sigma_sech2_, deriv_, deriv2_, k0_deriv_;
    CVec lin_minus_, lin_plus_;
};

// Map of the physical unknowns (y, v, kappa, delta_aa) to the diagonal variables.
FieldSet diag_transform(const SpectralField& y, const SpectralField& v, const SpectralField& kappa,
                        const SpectralField& delta_aa, double b);
struct PhysicalFields {
    SpectralField y, v, kappa, delta_aa;
};
PhysicalFields diag_inverse(const FieldSet& u, double b);

}  // namespace capwave
