#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/flow.hpp"
#include "cmc/profile.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace cmc;

TEST_CASE("turning number of simple polylines") {
    std::vector<Point2> circle, twice, figure8;
    for (int i = 0; i < 200; ++i) {
        const double t = 2 * M_PI * i / 200;
        circle.push_back({std::cos(t), std::sin(t)});
        figure8.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    for (int i = 0; i < 400; ++i) {
        // limacon with an inner loop turns twice
        const double t = 2 * M_PI * i / 400;
        const double r = 0.5 + std::cos(t);
        twice.push_back({r * std::cos(t), r * std::sin(t)});
    }
    CHECK(turning_number(circle) == 1);
    std::reverse(circle.begin(), circle.end());
    CHECK(turning_number(circle) == 1); // unsigned
    CHECK(turning_number(twice) == 2);
    CHECK(turning_number(figure8) == 0);
    std::vector<Point2> degenerate{{0, 0}, {1, 0}, {1, 0}, {0, 1}};
    CHECK_THROWS_AS(turning_number(degenerate), DomainError);
}

TEST_CASE("rotational profile: closed forms against finite differences") {
    const double e = 1e-5;
    for (double q : {0.3, 0.6, 0.95}) {
        for (double th : {0.5, 0.9, 1.4}) {
            for (double y : {0.2, 0.7, 1.9}) {
                const auto s0 = profile_rotational(y, q, th);
                const auto sp = profile_rotational(y + e, q, th), sm = profile_rotational(y - e, q, th);
                auto ang = [](const RotationalProfileSample& s) { return std::atan2(s.point[1], s.point[0]); };
                CHECK(std::abs(std::remainder(ang(sp) - ang(sm), 2 * M_PI) / (2 * e) - s0.psi_prime) < 1e-6);
                const double x1 = (sp.point[0] - sm.point[0]) / (2 * e), y1 = (sp.point[1] - sm.point[1]) / (2 * e);
                const double x2 = (sp.point[0] - 2 * s0.point[0] + sm.point[0]) / (e * e);
                const double y2 = (sp.point[1] - 2 * s0.point[1] + sm.point[1]) / (e * e);
                const double kfd = (x1 * y2 - y1 * x2) / std::pow(x1 * x1 + y1 * y1, 1.5);
                CHECK(std::abs(kfd - s0.kappa) < 1e-4 * (1 + s0.kappa));
                CHECK(s0.kappa > 0);
                CHECK(s0.g0 > 0);
                const auto& p = s0.point;
                CHECK(std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3] - 1) < 1e-12);
            }
        }
    }
}

TEST_CASE("rotational profile curves close with turning number l0") {
    for (auto [l0, l2] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 5}, {3, 4}}) {
        for (double q : {0.9, 0.4, 0.05}) {
            CAPTURE(l0);
            CAPTURE(l2);
            CAPTURE(q);
            const auto c = rotational_profile_curve(l0, l2, q, 2048);
            CHECK(c.turning == l0);
            // closing: the next sample after the last one is the first
            const auto& a = c.points.front();
            const auto& b = c.points.back();
            const auto& b2 = c.points[c.points.size() - 2];
            CHECK(std::hypot(a[0] - b[0], a[1] - b[1]) < 3 * std::hypot(b[0] - b2[0], b[1] - b2[1]));
        }
    }
}

TEST_CASE("sphere bouquet limit of the rotational profile") {
    // q -> 0: g1 -> cos(2 theta0), g2 -> -sin(2 theta0) tanh y, g0 -> sin(2 theta0) sech y
    const double q = 1e-7, th = 0.7;
    for (double y : {0.0, 0.5, 2.0}) {
        const auto s = profile_rotational(y, q, th);
        CHECK(std::abs(s.g1 - std::cos(2 * th)) < 1e-5);
        CHECK(std::abs(s.g2 + std::sin(2 * th) * std::tanh(y)) < 1e-5);
        CHECK(std::abs(s.g0 - std::sin(2 * th) / std::cosh(y)) < 1e-5);
    }
}

TEST_CASE("extracted profile sets of twizzled tori") {
    // total turning is l0 before the axis crossing and l1 + l2 - l0 after it
    for (Triple t : {Triple{2, 1, 5}, Triple{3, 1, 4}, Triple{3, 2, 5}}) {
        CAPTURE(t.str());
        const std::int64_t a = t.l0, b = t.l1 + t.l2 - t.l0;
        for (double f : {0.1, 0.3, 0.7, 0.9}) {
            MeshOptions o;
            o.nx = o.ny = 160;
            const auto m = build_mesh(family_state_at(t, f), o);
            for (int which : {1, 2}) {
                const int tt = total_turning(extract_profiles(m, which));
                CHECK((tt == a || tt == b));
            }
        }
    }
}

TEST_CASE("component counts near the flat endpoints") {
    // a union of gcd(l0, l_k) circles at the flat torus
    for (Triple t : {Triple{3, 1, 6}, Triple{4, 2, 5}, Triple{3, 1, 4}}) {
        CAPTURE(t.str());
        const auto m = build_mesh(family_state_at(t, 0.02));
        const auto p1 = extract_profiles(m, 1), p2 = extract_profiles(m, 2);
        CHECK(std::int64_t(p1.size()) == std::gcd(t.l0, t.l1));
        CHECK(std::int64_t(p2.size()) == std::gcd(t.l0, t.l2));
        CHECK(total_turning(p1) == t.l0);
        CHECK(total_turning(p2) == t.l0);
    }
}

TEST_CASE("extraction on a torus of revolution") {
    const auto m = build_mesh(rotational_state(2, 3, 0.5));
    CHECK(total_turning(extract_profiles(m, 1)) == 2);
    CHECK(total_turning(extract_profiles(m, 2)) == 2);
    CHECK_THROWS_AS(extract_profiles(m, 3), DomainError);
}
