#pragma once

#include "cmc/genus0.hpp"
#include "cmc/surface.hpp"

#include <array>
#include <vector>

namespace cmc {

using Point2 = std::array<double, 2>;

struct ProfileCurve {
    std::vector<Point2> points; // closing point not repeated
    bool closed = true;
    int turning = 0;
};

struct RotationalProfileSample {
    Vec4 point;        // f0 = exp(i chi0)(g1 + i g2) + g0 k
    double chi0 = 0;   // d chi0/dy = 4 nu q sin(2 theta1) / |X1|^2, chi0(0) = 0
    double g0 = 0, g1 = 0, g2 = 0, c = 0;
    double psi_prime = 0; // derivative of the polar angle of exp(i chi0)(g1 + i g2)
    double kappa = 0;     // curvature of that plane curve, 8 c^-3 nu^2 q / v
};

/// Profile curve of the torus of revolution with lambda1 = exp(2 i theta1),
/// lambda2 = 1/lambda1, at parameter y. Requires q in (0, 1], theta1 in (0, pi/2].
RotationalProfileSample profile_rotational(double y, double q, double theta1);

/// Plane curve r exp(i psi) (orthographic projection along k) sampled at n
/// points of y in [0, 2 periods K'), where periods = l2 closes the curve for
/// omega(theta1) = l0/l2.
ProfileCurve rotational_profile_curve(double q, double theta1, int periods, int n = 4096);
ProfileCurve rotational_profile_curve(std::int64_t l0, std::int64_t l2, double q, int n = 4096);

/// Unsigned degree of the tangent direction of a closed polyline.
/// Throws DomainError when the polyline is not immersed.
int turning_number(const ProfileCurve& curve);
int turning_number(const std::vector<Point2>& points);

/// Zero set of Re f_k (k = 1, 2) on the periodic mesh grid, restricted to the
/// hemisphere Im f_k > 0, mapped to the geodesic 2-sphere coordinates
/// (Im f_k, Re f_l, Im f_l) and projected stereographically from (-1, 0, 0).
/// Contours are traced by marching squares across the periodic seams.
/// Throws NumericalError for open contours.
std::vector<ProfileCurve> extract_profiles(const SurfaceMesh& mesh, int which = 1);

int total_turning(const std::vector<ProfileCurve>& curves);

} // namespace cmc
