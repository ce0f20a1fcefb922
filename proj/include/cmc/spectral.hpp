#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

namespace cmc {

using cplx = std::complex<double>;
using IVec3 = std::array<std::int64_t, 3>;

/// Sym points lambda_j = exp(2 i theta_j). `sheet` counts how often theta2 has
/// crossed the cut of omega; the tracked value of omega at theta2 is
/// branch + 2 * sheet. Flow states keep theta continued (possibly outside
/// (0, pi)); for such angles omega is the continued value and `sheet` equals
/// -floor(theta2 / pi).
struct SymPoints {
    double theta1 = 0;
    double theta2 = 0;
    int sheet = 0;
};

/// Flow coordinates: elliptic modulus q, k = cos(theta1+theta2), h = cos(theta1-theta2).
struct ModuliPoint {
    double q = 1;
    double k = 0;
    double h = 0;
};

struct NuOmega {
    double nu1, nu2, omega1, omega2;
};

struct KnotType {
    std::int64_t m, n;
};

/// nu on the unit circle: 1/2 sqrt(1 - 2q cos 2theta + q^2).
double nu_circle(double theta, double q);

/// Branch of omega on the unit circle minus the cut at lambda = sign(q),
/// zero at lambda = -sign(q), with lim_{q->0} omega = 1 - 2 theta / pi.
/// theta in (0, pi); returns branch + 2*sheet. Throws DomainError on the cut.
double omega_circle(double theta, double q, int sheet = 0);

/// omega continued along the real theta line (any theta off the cut lattice),
/// i.e. the value reached by analytic continuation from (0, pi) for q > 0.
double omega_continued(double theta, double q);

/// Integrand of omega in theta: d omega / d theta (negative for q > 0).
double omega_density(double theta, double q);

/// Branch and sheet of a continued angle: theta = base + n*pi with base in (0,pi)
/// (q > 0), returns (base, sheet) with sheet = -n.
std::pair<double, int> reduce_angle(double theta);

struct CoordsH {
    double k, h, H;
};

/// k = cos(theta1+theta2), h = cos(theta1-theta2), H = h / sqrt(1-h^2).
CoordsH sym_to_coords(const SymPoints& sp);

/// Mean curvature from h; throws DomainError for |h| >= 1.
double mean_curvature_from_h(double h);

/// Inverts sym_to_coords: theta1 = (s1 arccos k + s2 arccos h)/2,
/// theta2 = (s1 arccos k - s2 arccos h)/2 for the supplied signs, shifted into
/// (0, pi) and ordered so that nu(theta1) >= nu(theta2) at the given q.
/// Throws DomainError if no valid assignment exists.
SymPoints coords_to_sym(double k, double h, int s1 = 1, int s2 = 1, double q = 1.0);

/// nu and tracked omega at the sym points. Angles outside (0, pi) use the
/// continued omega (q > 0).
NuOmega nu_omega(double q, const SymPoints& sp);

/// Continued-fraction recovery of the simplest rational within tol.
/// Returns false if the denominator bound is exceeded first.
bool rational_recover(double x, double tol, std::int64_t max_den, std::int64_t& num,
                      std::int64_t& den);

/// m/n = (nu1-nu2)/(nu1+nu2) in lowest terms. Throws NumericalError if irrational
/// (no fraction within tol below denominator 1e6).
KnotType knot_type(double nu1, double nu2, double tol = 1e-9);

/// r1 = s.(0,nu1,nu2), r2 = s.(1,omega1,omega2) with omega2 on the tracked sheet.
std::pair<double, double> closing_residual(const IVec3& s, double q, const SymPoints& sp);

struct RealLocus {
    bool nu_real;
    bool omega_real;
};

/// Where nu and omega are real, following the closed-form description for both
/// signs of q. On the unit circle both are real.
RealLocus real_locus(cplx lambda, double q);

/// Mean curvature i(lambda2+lambda1)/(lambda2-lambda1) of the sym-point pair.
double mean_curvature_sym(cplx lambda1, cplx lambda2);

} // namespace cmc
