#pragma once

#include "cmc/flow.hpp"
#include "cmc/genus0.hpp"
#include "cmc/spectral.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cmc {

/// Quaternion a + b i + c j + d k, identified with the SU(2) matrix
/// [[a + b i, c + d i], [-c + d i, a - b i]] (i = diag(i,-i), j = [[0,1],[-1,0]]).
struct Quat {
    double a = 1, b = 0, c = 0, d = 0;
    Quat operator*(const Quat& o) const;
    Quat conj() const { return {a, -b, -c, -d}; }
    double norm2() const { return a * a + b * b + c * c + d * d; }
    cplx z1() const { return {a, b}; } // f = z1 + z2 j
    cplx z2() const { return {c, d}; }
};

Quat exp_i(double phi); // exp(phi i)
Quat exp_j(double phi); // exp(phi j)
Quat quat_exp(const Quat& pure);

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

inline Vec4 to_vec4(const Quat& q) { return {q.a, q.b, q.c, q.d}; }

struct FrameSample {
    double y, v, dv;
    double chi0, chi1, chi2;
    cplx x1c, x2c; // X1 = lambda v - q/v, X2 = v/lambda - q/v
    cplx j1, j2;   // J_k = -q v^{-1} X_k^{-1}
};

/// Angles of the equivariant frame F = exp(x nu i) P(y),
/// P = exp(chi0/2 i) exp(chi1/2 j) exp(chi2/2 i), at lambda = exp(2 i theta).
/// chi0 is integrated from 0 (chi0(2K') = -2 pi omega(theta)).
FrameSample frame_angles(double y, double theta, double q);

/// d chi0 / dy = -4 nu q sin(2 theta) / |X1|^2.
double chi0_density(double y, double theta, double q);

/// chi0 over [y0, y1] by adaptive quadrature.
double chi0_increment(double y0, double y1, double theta, double q);

Quat frame_P(const FrameSample& s);
Quat frame(double x, double y, double theta, double q);

/// Closed forms of F^{-1} dF along x and y as pure quaternions.
Quat omega_x(double y, double theta, double q);
Quat omega_y(double y, double theta, double q);

/// f = F_{lambda1} F_{lambda2}^{-1} at (x, y) for the sym points.
Quat immersion(double x, double y, double q, const SymPoints& sp);

/// Flat frame exp(pi i [[0, z/lambda + conj z], [z + conj(z) lambda, 0]]), lambda = r^2.
Quat flat_frame(cplx z, cplx root);
Quat flat_immersion(cplx z, cplx r1, cplx r2);

struct MeshPeriods {
    cplx g1, g2;      // in z = x + i y of the frame
    IMat23 windings{}; // rows (p_j0, p_j1, p_j2)
    double x1 = 0, x2 = 0;
    double consistency = 0; // max mismatch of x_j between the two sym points
};

/// Closing lattice of the genus-one frame: windings from closing_windings(s),
/// x_j = (p_j1 - p_j0 omega1)/nu1 checked against the second sym point,
/// gamma_j = x_j pi - 2 i p_j0 K'. Throws NumericalError when the two solves disagree.
MeshPeriods periods_for_mesh(double q, const SymPoints& sp, const IVec3& s, double tol = 1e-7);

/// Primitive s-vector orthogonal to both winding rows.
IVec3 s_from_windings(const IMat23& w);

struct SurfaceMesh {
    int nx = 0, ny = 0;
    std::vector<Vec4> vertices;
    std::vector<std::array<int, 4>> faces;
    std::vector<Vec3> projected;
    Vec4 pole{-1, 0, 0, 0};
    // metadata
    double q = 1, theta1 = 0, theta2 = 0;
    std::string triple;
    cplx g1, g2;
    double closure_defect = 0;
};

struct MeshOptions {
    int nx = 256, ny = 256;
    double closure_tol = 1e-6;
    int threads = 0; // 0: CMC_THREADS or hardware concurrency
};

/// Genus-one mesh over the fundamental domain {u g1 + v g2}; g1 must be real
/// so rows have constant y.
SurfaceMesh build_mesh(double q, const SymPoints& sp, const MeshPeriods& periods, const MeshOptions& opts = {});
SurfaceMesh build_mesh(const FlowState& state, const MeshOptions& opts = {});

/// Flat mesh for roots r1, r2 and periods g1, g2.
SurfaceMesh build_flat_mesh(cplx r1, cplx r2, cplx g1, cplx g2, const MeshOptions& opts = {});
SurfaceMesh build_flat_mesh(const Triple& t, const MeshOptions& opts = {});

struct FormResiduals {
    double unit_norm = 0;      // max | |f| - 1 |
    double conformality = 0;   // max (|E - G| + |F|) / E
    double metric = 0;         // max |E - (1-h^2) v^2| / E (genus one)
    double mean_curvature = 0; // max |H_fd - h/sqrt(1-h^2)|
    double hopf = 0;           // max |Q_fd - Q| for Q = (i/4) q (1/lambda1 - 1/lambda2)
    double frame = 0;          // max residual of F^{-1} dF against the closed forms
    double monodromy = 0;      // max residual of F(z+gamma) F(z)^{-1} = +-exp(pi(x nu + p0 omega) i)
    double closure = 0;        // max |f(z + gamma_j) - f(z)|
    double scale = 0;          // max conformal factor E
};

/// Finite-difference checks of an immersion at n x n points of the fundamental domain.
FormResiduals fundamental_form_residuals(double q, const SymPoints& sp, const MeshPeriods& periods, int n = 6);
FormResiduals flat_form_residuals(cplx r1, cplx r2, cplx g1, cplx g2, int n = 6);

/// Stereographic projection from a unit pole; throws DomainError at the pole.
Vec3 stereographic(const Vec4& p, const Vec4& pole = {-1, 0, 0, 0});
Vec4 inverse_stereographic(const Vec3& x, const Vec4& pole = {-1, 0, 0, 0});

/// Default pole (-1,0,0,0) unless the vertices come within min_dist of it;
/// otherwise the candidate pole farthest from the surface.
Vec4 choose_pole(const std::vector<Vec4>& vertices, double min_dist = 1e-3);

/// Threads for internal parallel loops: CMC_THREADS if set, else hardware.
int default_threads();

} // namespace cmc
