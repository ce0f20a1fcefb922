#include "cmc/spectral.hpp"
#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace cmc {

namespace {

constexpr double pi = std::numbers::pi;

double density_with(double theta, double q, double kp, double ep) {
    return -(ep - q * kp * std::cos(2.0 * theta)) / (pi * nu_circle(theta, q));
}

// Branch for q > 0 on [0, pi]: integrate the density from the zero at pi/2.
// The end values are the one-sided limits.
double omega_branch_closed(double theta, double q) {
    const auto c = elliptic_KE_comp(q);
    return quad([&](double t) { return density_with(t, q, c.kk, c.ee); }, pi / 2, theta, 1e-14);
}

double omega_branch_pos(double theta, double q) {
    if (!(theta > 0.0 && theta < pi))
        throw DomainError("omega: angle on the cut of the branch");
    return omega_branch_closed(theta, q);
}

} // namespace

double nu_circle(double theta, double q) {
    const double r = 1.0 - 2.0 * q * std::cos(2.0 * theta) + q * q;
    return 0.5 * std::sqrt(std::max(r, 0.0));
}

double omega_density(double theta, double q) {
    const auto c = elliptic_KE_comp(q);
    return density_with(theta, q, c.kk, c.ee);
}

double omega_circle(double theta, double q, int sheet) {
    if (q == 0.0) throw DomainError("omega: q must be nonzero");
    if (!(theta > 0.0 && theta < pi)) throw DomainError("omega: angle outside (0, pi)");
    double value;
    if (q > 0) {
        value = omega_branch_pos(theta, q);
    } else {
        if (theta == pi / 2) throw DomainError("omega: angle on the cut of the branch");
        // lambda -> -lambda exchanges q and -q
        value = omega_branch_pos(theta < pi / 2 ? theta + pi / 2 : theta - pi / 2, -q);
    }
    return value + 2.0 * sheet;
}

std::pair<double, int> reduce_angle(double theta) {
    const double n = std::floor(theta / pi);
    return {theta - n * pi, -static_cast<int>(n)};
}

double omega_continued(double theta, double q) {
    if (q == 0.0) throw DomainError("omega: q must be nonzero");
    const double shifted = (q > 0) ? theta : theta + pi / 2;
    const auto [base, sheet] = reduce_angle(shifted);
    // the continuation is analytic across the cut: use the one-sided limit there
    return omega_branch_closed(std::clamp(base, 0.0, pi), std::abs(q)) + 2.0 * sheet;
}

double mean_curvature_from_h(double h) {
    if (!(std::abs(h) < 1.0)) throw DomainError("mean curvature: coincident sym points (|h| = 1)");
    return h / std::sqrt((1.0 - h) * (1.0 + h));
}

CoordsH sym_to_coords(const SymPoints& sp) {
    const double k = std::cos(sp.theta1 + sp.theta2);
    const double h = std::cos(sp.theta1 - sp.theta2);
    return {k, h, mean_curvature_from_h(h)};
}

SymPoints coords_to_sym(double k, double h, int s1, int s2, double q) {
    if (std::abs(k) > 1.0 || std::abs(h) > 1.0) throw DomainError("coords_to_sym: |k|,|h| must be <= 1");
    const double A = std::acos(k), D = std::acos(h);
    // candidates ordered: the requested signs first
    std::vector<std::pair<int, int>> order = {{s1, s2}, {s1, -s2}, {-s1, s2}, {-s1, -s2}};
    for (auto [a, b] : order) {
        const double S = (a > 0) ? A : 2.0 * pi - A;
        const double Dl = b * D;
        double t1 = 0.5 * (S + Dl), t2 = 0.5 * (S - Dl);
        if (!(t1 > 0 && t1 < pi && t2 > 0 && t2 < pi)) continue;
        const double n1 = nu_circle(t1, q), n2 = nu_circle(t2, q);
        const bool tie = std::abs(n1 - n2) <= 1e-14;
        if ((!tie && n1 < n2) || (tie && t1 > pi / 2 && t2 <= pi / 2)) std::swap(t1, t2);
        return {t1, t2, 0};
    }
    throw DomainError("coords_to_sym: no branch places both angles in (0, pi)");
}

NuOmega nu_omega(double q, const SymPoints& sp) {
    auto om = [q](double th, int sheet) {
        if (th > 0.0 && th < pi) return omega_circle(th, q, sheet);
        if (q < 0) throw DomainError("nu_omega: continued angles need q > 0");
        return omega_continued(th, q);
    };
    return {nu_circle(sp.theta1, q), nu_circle(sp.theta2, q), om(sp.theta1, 0), om(sp.theta2, sp.sheet)};
}

bool rational_recover(double x, double tol, std::int64_t max_den, std::int64_t& num,
                      std::int64_t& den) {
    const double sign = (x < 0) ? -1.0 : 1.0;
    const double ax = std::abs(x);
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = ax;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        if (a > 9e15) break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) return false;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (std::abs(ax - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
            num = static_cast<std::int64_t>(sign) * h1;
            den = k1;
            return true;
        }
        const double frac = r - a;
        if (frac <= 0) break;
        r = 1.0 / frac;
    }
    if (k1 > 0 && std::abs(ax - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
        num = static_cast<std::int64_t>(sign) * h1;
        den = k1;
        return true;
    }
    return false;
}

KnotType knot_type(double nu1, double nu2, double tol) {
    if (!(nu1 > 0 && nu2 > 0)) throw DomainError("knot_type: nu must be positive");
    const double r = (nu1 - nu2) / (nu1 + nu2);
    std::int64_t m = 0, n = 1;
    if (!rational_recover(r, tol, 1000000, m, n))
        throw NumericalError("knot_type: orbit ratio is not rational within tolerance", r);
    return {m, n};
}

std::pair<double, double> closing_residual(const IVec3& s, double q, const SymPoints& sp) {
    const auto no = nu_omega(q, sp);
    const double r1 = s[1] * no.nu1 + s[2] * no.nu2;
    const double r2 = s[0] + s[1] * no.omega1 + s[2] * no.omega2;
    return {r1, r2};
}

RealLocus real_locus(cplx lambda, double q) {
    if (lambda == 0.0) throw DomainError("real_locus: lambda must be nonzero");
    if (q == 0.0 || std::abs(q) > 1.0) throw DomainError("real_locus: q must lie in [-1,1]\\{0}");
    constexpr double eps = 1e-12;
    const bool circle = std::abs(std::abs(lambda) - 1.0) <= eps;
    if (circle) return {true, true};
    const bool real = std::abs(lambda.imag()) <= eps * std::max(1.0, std::abs(lambda));
    if (!real) return {false, false};
    const double x = lambda.real();
    const double lo = std::min(q, 1.0 / q), hi = std::max(q, 1.0 / q);
    bool nu_real, omega_real;
    if (q > 0) {
        nu_real = (x >= lo - eps && x <= hi + eps) || x < 0;
        omega_real = (x >= 0 && x <= q + eps) || x >= 1.0 / q - eps;
    } else {
        nu_real = (x >= lo - eps && x <= hi + eps) || x > 0;
        omega_real = x <= 1.0 / q + eps || (x >= q - eps && x <= 0);
    }
    return {nu_real, omega_real};
}

double mean_curvature_sym(cplx lambda1, cplx lambda2) {
    const cplx i(0, 1);
    return (i * (lambda2 + lambda1) / (lambda2 - lambda1)).real();
}

} // namespace cmc
