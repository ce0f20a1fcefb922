#include "doctest.h"

#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace cmc;
using std::numbers::pi;

namespace {

// Defining integrals in trigonometric form, evaluated by brute-force quadrature.
double k_oracle(double q) {
    return quad([&](double t) { return 1.0 / std::sqrt(1.0 - q * q * std::sin(t) * std::sin(t)); },
                0.0, pi / 2, 1e-14);
}
double e_oracle(double q) {
    return quad([&](double t) { return std::sqrt(1.0 - q * q * std::sin(t) * std::sin(t)); }, 0.0,
                pi / 2, 1e-14);
}

} // namespace

TEST_CASE("quadrature basics") {
    CHECK(quad([](double t) { return std::sin(t); }, 0.0, pi, 1e-13) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(quad([](double) { return 0.0; }, 0.0, 1.0, 1e-13) == 0.0);
    const double k = quad([](double t) { return 1.0 / std::sqrt(1.0 - 0.25 * std::sin(t) * std::sin(t)); },
                          0.0, pi / 2, 1e-14);
    CHECK(std::abs(k - elliptic_KE(0.5).kk) < 1e-13);
}

TEST_CASE("quadrature budget exhaustion reports an estimate") {
    auto f = [](double t) { return std::sin(1.0 / (t + 1e-9)); };
    CHECK_THROWS_AS(quad_detail(f, 0.0, 1.0, 1e-15, 50), NumericalError);
}

TEST_CASE("complete integrals against quadrature") {
    const auto z = elliptic_KE(0.0);
    CHECK(z.kk == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(z.ee == doctest::Approx(pi / 2).epsilon(1e-15));
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const auto ke = elliptic_KE(q);
        CHECK(std::abs(ke.kk / k_oracle(q) - 1.0) < 1e-12);
        CHECK(std::abs(ke.ee / e_oracle(q) - 1.0) < 1e-12);
    }
    // logarithmic divergence of K and E -> 1 near the singular modulus
    const auto near = elliptic_KE(1.0 - 1e-12);
    CHECK(near.kk > 14.0);
    CHECK(std::abs(near.ee - 1.0) < 1e-9);
    CHECK_THROWS_AS(elliptic_KE(1.0), DomainError);
    CHECK_THROWS_AS(elliptic_KE(-0.1), DomainError);
}

TEST_CASE("complementary pair") {
    for (double q : {0.2, 0.6, 0.95}) {
        const auto c = elliptic_KE_comp(q);
        const double qc = std::sqrt(1 - q * q);
        CHECK(std::abs(c.kk - k_oracle(qc)) < 1e-12);
        CHECK(std::abs(c.ee - e_oracle(qc)) < 1e-12);
        const auto m = elliptic_KE_comp(-q);
        CHECK(m.kk == c.kk);
        CHECK(m.ee == c.ee);
    }
    const auto one = elliptic_KE_comp(1.0);
    CHECK(one.kk == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(elliptic_KE_comp(-1.0).ee == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK_THROWS_AS(elliptic_KE_comp(0.0), DomainError);
}

TEST_CASE("Legendre relation") {
    for (int i = 1; i <= 19; ++i) {
        const double q = 0.05 * i;
        const auto ke = elliptic_KE(q);
        const auto c = elliptic_KE_comp(q);
        CHECK(std::abs(ke.ee * c.kk + c.ee * ke.kk - ke.kk * c.kk - pi / 2) < 1e-12);
    }
}

TEST_CASE("series at q = 1") {
    for (double d : {-0.05, -0.02, -0.005, 0.0}) {
        const double q = 1.0 + d;
        const auto c = elliptic_KE_comp(q);
        const double ks = pi * (0.5 - d / 4 + 5 * d * d / 32 - 7 * d * d * d / 64);
        const double es = pi * (0.5 + d / 4 + d * d / 32 - d * d * d / 64);
        // remainder is fourth order; 10 d^4 is a generous constant
        CHECK(std::abs(c.kk - ks) <= 10 * std::pow(d, 4) + 1e-15);
        CHECK(std::abs(c.ee - es) <= 10 * std::pow(d, 4) + 1e-15);
    }
    // the extended evaluation continues smoothly past q = 1
    const double d = 0.01;
    const auto c = elliptic_KE_comp_ext(1.0 + d);
    CHECK(std::abs(c.kk - pi * (0.5 - d / 4 + 5 * d * d / 32 - 7 * d * d * d / 64)) < 1e-6);
}

TEST_CASE("inequality chain 1 <= 2E'/(1+q^2) < K' < E'/|q|") {
    for (int i = 1; i <= 200; ++i) {
        const double q = -1.0 + 2.0 * i / 201.0;
        if (q == 0.0) continue;
        const auto c = elliptic_KE_comp(q);
        CHECK(1.0 <= 2 * c.ee / (1 + q * q));
        CHECK(2 * c.ee / (1 + q * q) < c.kk);
        CHECK(c.kk < c.ee / std::abs(q));
    }
}

TEST_CASE("flow coefficients: series and direct branches agree") {
    for (double q : {0.5, 0.6, 0.70710678, 0.72, 0.8}) {
        const auto f = flow_coefficients(q);
        const auto c = elliptic_KE_comp(q);
        const double p = 1 - q * q;
        CHECK(std::abs(f.a - ((1 + q * q) * c.ee - 2 * q * q * c.kk) / p) < 1e-12);
        CHECK(std::abs(f.b - (2 * c.ee - (1 + q * q) * c.kk) / p) < 1e-12);
    }
    const auto one = flow_coefficients(1.0);
    CHECK(one.a == 0.0);
    CHECK(one.b == 0.0);
    // leading behaviour a ~ 3 pi p / 16
    const double p = 1e-6;
    CHECK(std::abs(flow_coefficients(std::sqrt(1 - p)).a / p - 3 * pi / 16) < 1e-5);
}

TEST_CASE("dn: inversion oracle, ODE, period, limits") {
    for (double q : {0.05, 0.3, 0.6, 0.9, 0.999}) {
        const double m = 1 - q * q;
        const double kp = elliptic_KE_comp(q).kk;
        for (double phi : {0.1, 0.7, 1.2, 1.5}) {
            const double y = quad([&](double t) { return 1.0 / std::sqrt(1 - m * std::sin(t) * std::sin(t)); },
                                  0.0, phi, 1e-14);
            CHECK(std::abs(jacobi_dn(y, q).v - std::sqrt(1 - m * std::sin(phi) * std::sin(phi))) < 1e-12);
        }
        for (double y : {0.0, 0.3, 1.1, 2.7, 5.0}) {
            const auto d = jacobi_dn(y, q);
            const double h = 1e-5;
            const double fd = (jacobi_dn(y + h, q).v - jacobi_dn(y - h, q).v) / (2 * h);
            CHECK(std::abs(fd - d.dv) < 1e-8);
            CHECK(std::abs(d.dv * d.dv + (d.v * d.v - 1) * (d.v * d.v - q * q)) < 1e-12);
            CHECK(std::abs(jacobi_dn(y + 2 * kp, q).v - d.v) < 1e-10);
            CHECK(d.v <= 1.0 + 1e-15);
            CHECK(d.v >= q - 1e-15);
        }
        CHECK(jacobi_dn(0.0, q).v == doctest::Approx(1.0));
        CHECK(std::abs(jacobi_dn(kp, q).v - q) < 1e-12);
    }
    for (double y : {0.0, 0.5, 2.0, 6.0}) {
        CHECK(std::abs(jacobi_dn(y, 1 - 1e-8).v - 1.0) < 1e-6);
        CHECK(std::abs(jacobi_dn(y, 1e-8).v - 1.0 / std::cosh(y)) < 1e-6);
        CHECK(jacobi_dn(y, 0.0).v == doctest::Approx(1.0 / std::cosh(y)));
    }
}

TEST_CASE("dn near the sech limit stays on the orbit") {
    const double q = 1e-7;
    const double kp = elliptic_KE_comp(q).kk;
    for (double y : {0.3, 0.5 * kp, 0.8 * kp, kp, 1.7 * kp}) {
        const auto d = jacobi_dn(y, q);
        CHECK(std::abs(d.dv * d.dv + (d.v * d.v - 1) * (d.v * d.v - q * q)) < 1e-10);
    }
    CHECK(std::abs(jacobi_dn(kp, q).v - q) < 1e-12);
}
