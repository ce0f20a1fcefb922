#include "doctest.h"

#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/quadrature.hpp"
#include "cmc/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cmc;
using std::numbers::pi;

TEST_CASE("nu on the circle") {
    CHECK(nu_circle(0.3, 0.0) == doctest::Approx(0.5));
    CHECK(nu_circle(pi / 2, 0.5) == doctest::Approx(0.75));
    CHECK(nu_circle(0.0, 0.5) == doctest::Approx(0.25));
    // 4 nu^2 = (lambda - q)(1/lambda - q)
    for (double th : {0.2, 1.0, 2.5}) {
        for (double q : {-0.7, 0.3, 0.9}) {
            const cplx lam = std::polar(1.0, 2 * th);
            const cplx v = (lam - q) * (1.0 / lam - q);
            CHECK(std::abs(v.imag()) < 1e-14);
            CHECK(std::abs(4 * nu_circle(th, q) * nu_circle(th, q) - v.real()) < 1e-14);
        }
    }
}

TEST_CASE("omega normalisation, increment and skew symmetry") {
    CHECK(omega_circle(pi / 2, 0.5) == doctest::Approx(0.0));
    CHECK(std::abs(omega_circle(pi / 2, 0.5, 1) - 2.0) < 1e-15);
    for (double q : {0.01, 0.2, 0.5, 0.8, 0.99, 0.999999}) {
        const double inc = quad([&](double t) { return omega_density(t, q); }, 0.0, pi, 1e-13);
        CHECK(std::abs(std::abs(inc) - 2.0) < 1e-8);
        for (double th : {0.05, 0.4, 1.1, 1.5}) {
            CHECK(std::abs(omega_circle(th, q) + omega_circle(pi - th, q)) < 1e-8);
            CHECK(std::abs(omega_circle(th, -q) + omega_circle(pi - th, -q)) < 1e-8);
        }
        // jump of 2 across the cut
        CHECK(std::abs(omega_circle(1e-9, q) - omega_circle(pi - 1e-9, q) - 2.0) < 1e-6);
    }
    CHECK_THROWS_AS(omega_circle(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(omega_circle(pi / 2, -0.5), DomainError);
}

TEST_CASE("omega at q = 1 is cos theta and tends to 1 - 2 theta / pi as q -> 0") {
    for (double th : {0.1, 0.7, pi / 4, 2.0, 3.0}) {
        CHECK(std::abs(omega_circle(th, 1.0) - std::cos(th)) < 1e-12);
        CHECK(std::abs(omega_circle(th, 1e-6) - (1 - 2 * th / pi)) < 1e-4);
    }
}

TEST_CASE("omega for negative q is the lambda -> -lambda mirror") {
    CHECK(std::abs(omega_circle(0.01, -0.4)) < 0.1);
    CHECK(std::abs(omega_circle(0.3, -0.4) - omega_circle(0.3 + pi / 2, 0.4)) < 1e-13);
    CHECK(std::abs(omega_continued(0.3, -0.4) - omega_circle(0.3, -0.4)) < 1e-13);
}

TEST_CASE("omega continuation across the cut") {
    const double q = 0.4;
    for (double th : {-0.3, 3.5, 6.5}) {
        const auto [base, sheet] = reduce_angle(th);
        CHECK(std::abs(omega_continued(th, q) - omega_circle(base, q, sheet)) < 1e-14);
    }
    // continuity at theta = pi
    CHECK(std::abs(omega_continued(pi - 1e-7, q) - omega_continued(pi + 1e-7, q)) < 1e-5);
    // derivative of the continuation equals the density
    const double h = 1e-5;
    const double fd = (omega_continued(pi + h, q) - omega_continued(pi - h, q)) / (2 * h);
    CHECK(std::abs(fd - omega_density(pi, q)) < 1e-6);
}

TEST_CASE("zeros of d omega lie in (q,1) and avoid those of d nu") {
    for (double q = 0.05; q < 1.0; q += 0.05) {
        const auto c = elliptic_KE_comp(q);
        auto g = [&](double lam) { return 2 * c.ee - q * c.kk * (lam + 1 / lam); };
        // g(q) < 0 < g(1) brackets a root strictly between
        CHECK(g(q) < 0);
        CHECK(g(1.0) > 0);
        double lo = q, hi = 1.0;
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (lo + hi);
            (g(m) < 0 ? lo : hi) = m;
        }
        CHECK(lo > q);
        CHECK(lo < 1.0);
        CHECK(std::abs(lo - q) > 1e-6);
    }
}

TEST_CASE("coordinates and sym points") {
    const auto c = sym_to_coords({pi / 4, 3 * pi / 4, 0});
    CHECK(c.k == doctest::Approx(-1.0));
    CHECK(std::abs(c.h) < 1e-15);
    CHECK(std::abs(c.H) < 1e-15);
    CHECK(mean_curvature_from_h(1 / std::sqrt(2.0)) == doctest::Approx(1.0));
    CHECK(mean_curvature_from_h(0.0) == 0.0);
    CHECK_THROWS_AS(mean_curvature_from_h(1.0), DomainError);

    const auto sp = coords_to_sym(-1.0, 0.0);
    CHECK(sp.theta1 == doctest::Approx(pi / 4));
    CHECK(sp.theta2 == doctest::Approx(3 * pi / 4));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.99, 0.99);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const double k = u(rng), h = u(rng);
        SymPoints s;
        try {
            s = coords_to_sym(k, h, 1, 1, 0.5);
        } catch (const DomainError&) {
            continue;
        }
        const auto back = sym_to_coords(s);
        CHECK(std::abs(back.k - k) < 1e-12);
        CHECK(std::abs(back.h - h) < 1e-12);
        CHECK(nu_circle(s.theta1, 0.5) >= nu_circle(s.theta2, 0.5));
        ++checked;
    }
    CHECK(checked > 200);
    CHECK_THROWS_AS(coords_to_sym(1.0, 0.0), DomainError);
}

TEST_CASE("k = h marks a sym point at lambda = 1") {
    // theta1 = 0 forces k = h; a nearby pair with tiny theta1 gives nearly equal coordinates
    const SymPoints sp{1e-8, 1.2, 0};
    const auto c = sym_to_coords(sp);
    CHECK(std::abs(c.k - c.h) < 1e-7);
}

TEST_CASE("rational recovery and knot type") {
    std::int64_t n = 0, d = 0;
    CHECK(rational_recover(0.375, 1e-12, 100, n, d));
    CHECK(n == 3);
    CHECK(d == 8);
    CHECK(rational_recover(-2.0 / 7.0, 1e-12, 100, n, d));
    CHECK(n == -2);
    CHECK(d == 7);
    CHECK_FALSE(rational_recover(pi, 1e-12, 1000, n, d));
    const auto kt = knot_type(3.0, 1.0);
    CHECK(kt.m == 1);
    CHECK(kt.n == 2);
    const auto z = knot_type(0.4, 0.4);
    CHECK(z.m == 0);
    CHECK(z.n == 1);
    CHECK_THROWS_AS(knot_type(std::sqrt(2.0), 1.0, 1e-14), NumericalError);
}

TEST_CASE("closing residual") {
    // flat data for the (2,1,3) start point closes with s = (-4,-2,4) up to scale
    const SymPoints sp = coords_to_sym(-11.0 / 16, 0.25);
    const auto no = nu_omega(1.0, sp);
    const double l0 = std::abs(no.nu1 * no.omega2 - no.nu2 * no.omega1);
    CHECK(std::abs((no.nu1 - no.nu2) / l0 - 0.5) < 1e-12);
    CHECK(std::abs((no.nu1 + no.nu2) / l0 - 1.5) < 1e-12);
    const IVec3 sym = {0, 1, -1};
    const auto r = closing_residual(sym, 0.5, {0.4, pi - 0.4, 0});
    CHECK(std::abs(r.first) < 1e-15);
    const auto g = closing_residual({3, 1, 1}, 0.5, {0.4, 1.0, 0});
    CHECK(std::abs(g.first) + std::abs(g.second) > 1e-3);
}

TEST_CASE("real locus") {
    CHECK(real_locus(std::polar(1.0, 0.3), 0.5).nu_real);
    const auto a = real_locus(0.7, 0.5);
    CHECK(a.nu_real);
    CHECK_FALSE(a.omega_real);
    const auto b = real_locus(cplx(2, 1), 0.5);
    CHECK_FALSE(b.nu_real);
    CHECK_FALSE(b.omega_real);
    // off the circle, both real only at the branch points
    for (double q : {0.3, 0.7, -0.3, -0.7}) {
        for (int i = -400; i <= 400; ++i) {
            const double x = i * 0.01;
            if (x == 0 || std::abs(std::abs(x) - 1) < 1e-9) continue;
            const auto r = real_locus(x, q);
            if (r.nu_real && r.omega_real) {
                const bool at_branch = std::abs(x - q) < 1e-9 || std::abs(x - 1 / q) < 1e-9;
                CHECK(at_branch);
            }
        }
        CHECK(real_locus(q, q).nu_real);
        CHECK(real_locus(q, q).omega_real);
    }
}

TEST_CASE("mean curvature of sym points") {
    CHECK(std::abs(mean_curvature_sym(cplx(0, 1), cplx(0, -1))) < 1e-15);
    const double t1 = 0.4, t2 = 1.3;
    const double H = mean_curvature_sym(std::polar(1.0, 2 * t1), std::polar(1.0, 2 * t2));
    CHECK(H == doctest::Approx(1.0 / std::tan(t2 - t1)));
}
