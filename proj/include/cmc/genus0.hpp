#pragma once

#include "cmc/spectral.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace cmc {

/// Integer invariant (l0, l1, l2) of a flat torus with a double point.
/// Valid triples: gcd = 1 and 0 <= l1 < l0 < l2.
struct Triple {
    std::int64_t l0 = 0, l1 = 0, l2 = 0;

    bool valid() const;
    bool rotational() const { return l1 == 0; }
    /// Involution partner (l1+l2-l0, l1, l2).
    Triple partner() const { return {l1 + l2 - l0, l1, l2}; }
    std::string str() const;
    static Triple parse(const std::string& text); // "l0,l1,l2"
    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

struct Lattice {
    cplx g1, g2;
};

/// Flat spectral data with a double point lambda0. The square roots r_k
/// (r_k^2 = lambda_k) are part of the data: the flat frame depends on them.
struct SpectralDataFlat {
    cplx r0, r1, r2;
    cplx lam0() const { return r0 * r0; }
    cplx lam1() const { return r1 * r1; }
    cplx lam2() const { return r2 * r2; }
};

using IMat23 = std::array<IVec3, 2>;

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c);

/// Principal square root of a unimodular number.
cplx unit_sqrt(cplx lambda);

/// pi i (z / r + conj(z) r) = 2 pi i <z, r> with r the chosen root of lambda.
cplx flat_log_mu(cplx z, cplx root);

/// kappa1 = (r1 + r2)/2, kappa2 = (r1 - r2)/2 and the dual lattice under Re(x conj y).
std::pair<Lattice, Lattice> base_lattice_roots(cplx r1, cplx r2);
std::pair<Lattice, Lattice> base_lattice(cplx lambda1, cplx lambda2);

/// Dual lattice under <x, y> = Re(x conj(y)).
Lattice dual_lattice(const Lattice& l);

/// Periods with windings p_jk = 2 <gamma_j, r_k>:
/// gamma_j = (r1 lambda2 p_j1 - lambda1 r2 p_j2) / (lambda2 - lambda1).
std::pair<cplx, cplx> periods_from_windings_roots(cplx r1, cplx r2, std::int64_t p11,
                                                  std::int64_t p12, std::int64_t p21,
                                                  std::int64_t p22);
std::pair<cplx, cplx> periods_from_windings(cplx lambda1, cplx lambda2, std::int64_t p11,
                                            std::int64_t p12, std::int64_t p21, std::int64_t p22);

/// Clifford family of embedded flat tori: h = -tanh t, H = -sinh t.
std::pair<double, double> clifford_family(double t);

/// Integer representative of i (r0,r1,r2) x conj(r0,r1,r2) with gcd(s0, s1+s2, s1-s2) = 2.
IVec3 s_vector(const SpectralDataFlat& sd, double tol = 1e-9);

/// tau(s) = (s0^2 - (s1-s2)^2)(s0^2 - (s1+s2)^2).
std::int64_t tau(const IVec3& s);

Triple triple_from_s(const IVec3& s);
Triple triple_from_spectral(const SpectralDataFlat& sd);

/// s = (2 l0, l1+l2, l1-l2) for the triple.
IVec3 s_from_triple(const Triple& t);

/// lambda0 = 1 and the sym-point roots solving s.r = 0, both with argument in [0, pi).
SpectralDataFlat spectral_from_triple(const Triple& t);

/// The four lattices attached to a triple, as predicates on n1 g1* + n2 g2*.
enum class SublatticeKind { Plain, C, D, DC };
bool in_triple_sublattice(const Triple& t, SublatticeKind kind, std::int64_t n1, std::int64_t n2);
/// Index in the dual lattice (counted on an l0 x l0 box, which the lattice contains).
std::int64_t triple_sublattice_index(const Triple& t, SublatticeKind kind);

/// Basis {P, Q} of {P in Z^3 : s.P = 0, P1 = P2 mod 2}, reduced so that P[0] = 0
/// and Q[0] > 0. These are the winding rows (p_j0, p_j1, p_j2).
IMat23 closing_windings(const IVec3& s);

/// Periods of the flat torus of a triple (double point at lambda0 = 1).
std::pair<cplx, cplx> flat_triple_periods(const Triple& t, IMat23* windings = nullptr);

} // namespace cmc
