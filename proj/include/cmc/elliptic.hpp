#pragma once

#include <functional>

namespace cmc {

struct EllipticPair {
    double kk; // complete integral of the first kind
    double ee; // complete integral of the second kind
};

/// K(q), E(q) for the modulus q in [0,1), via the arithmetic-geometric mean.
EllipticPair elliptic_KE(double q);

/// Complementary pair K'(q) = K(sqrt(1-q^2)), E'(q) = E(sqrt(1-q^2)).
/// Even in q, equal to (pi/2, pi/2) at q = +-1. Throws DomainError at q = 0.
EllipticPair elliptic_KE_comp(double q);

/// Same as elliptic_KE_comp but also accepts |q| slightly above 1
/// (|1-q^2| <= 1/2), continuing analytically through the hypergeometric series
/// in p = 1-q^2. Used by the flow, whose integrator may overshoot q = 1.
EllipticPair elliptic_KE_comp_ext(double q);

/// Coefficients of the torus flow that carry the removable singularity at q^2 = 1:
///   a = ((1+q^2)E' - 2q^2 K') / (1-q^2),   b = (2E' - (1+q^2)K') / (1-q^2).
/// Near q^2 = 1 both are summed from series in p = 1-q^2 with the cancellation
/// done exactly on the coefficients.
struct FlowCoefficients {
    double kp, ep; // K', E'
    double a, b;
};
FlowCoefficients flow_coefficients(double q);

struct DnValue {
    double v;  // dn
    double dv; // derivative in y
};

/// v(y) = dn(y | m = 1-q^2): v(0) = 1, range [q,1], period 2K'(q),
/// (v')^2 + (v^2-1)(v^2-q^2) = 0. Negative q is treated as |q|; q = 0 gives sech.
DnValue jacobi_dn(double y, double q);

} // namespace cmc
