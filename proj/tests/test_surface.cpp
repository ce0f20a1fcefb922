#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/flow.hpp"
#include "cmc/surface.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cmc;

namespace {

double norm4(const Vec4& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); }

double qdist(const Quat& a, const Quat& b) {
    return std::sqrt((a.a - b.a) * (a.a - b.a) + (a.b - b.b) * (a.b - b.b) + (a.c - b.c) * (a.c - b.c) +
                     (a.d - b.d) * (a.d - b.d));
}

void check_forms(const FormResiduals& r, bool genus_one) {
    CHECK(r.unit_norm < 1e-10);
    CHECK(r.conformality < 1e-6 * std::max(1.0, r.scale));
    CHECK(r.mean_curvature < 1e-3);
    CHECK(r.closure < 1e-6);
    CHECK(r.monodromy < 1e-6);
    if (genus_one) {
        CHECK(r.frame < 1e-6);
        CHECK(r.metric < 1e-3);
        CHECK(r.hopf < 1e-3);
    }
}

} // namespace

TEST_CASE("quaternion algebra") {
    const Quat i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(qdist(i * j, k) < 1e-15);
    CHECK(qdist(j * k, i) < 1e-15);
    CHECK(qdist(k * i, j) < 1e-15);
    CHECK(qdist(i * i, Quat{-1, 0, 0, 0}) < 1e-15);
    CHECK(qdist(exp_i(0.7), quat_exp({0, 0.7, 0, 0})) < 1e-15);
    CHECK(qdist(exp_j(-0.3), quat_exp({0, 0, -0.3, 0})) < 1e-15);
    const Quat p = quat_exp({0, 0.2, -0.5, 1.1});
    CHECK(std::abs(p.norm2() - 1) < 1e-14);
    CHECK(qdist(p * p.conj(), Quat{}) < 1e-14);
}

TEST_CASE("frame angles and chi0 increment") {
    for (double q : {0.3, 0.7, 0.95}) {
        const double kp = elliptic_KE_comp(q).kk;
        for (double th : {0.4, 1.2, 2.5}) {
            const double one = chi0_increment(0, 2 * kp, th, q);
            CHECK(std::abs(one + 2 * M_PI * omega_circle(th, q)) < 1e-9);
            CHECK(std::abs(chi0_increment(0, 6 * kp, th, q) - 3 * one) < 1e-8);
            const auto s = frame_angles(2 * kp, th, q);
            CHECK(std::abs(s.chi0 - one) < 1e-9);
        }
    }
}

TEST_CASE("frame derivative matches the closed forms") {
    const double q = 0.6, th = 1.1;
    const double eps = 1e-6;
    for (double x : {0.0, 0.8}) {
        for (double y : {0.1, 1.3, 2.9}) {
            const Quat F = frame(x, y, th, q);
            const Quat Fx = frame(x + eps, y, th, q), Fxm = frame(x - eps, y, th, q);
            const Quat Fy = frame(x, y + eps, th, q), Fym = frame(x, y - eps, th, q);
            auto fd = [&](const Quat& p, const Quat& m) {
                const Quat d{(p.a - m.a) / (2 * eps), (p.b - m.b) / (2 * eps), (p.c - m.c) / (2 * eps),
                             (p.d - m.d) / (2 * eps)};
                return F.conj() * d;
            };
            CHECK(qdist(fd(Fx, Fxm), omega_x(y, th, q)) < 1e-6);
            CHECK(qdist(fd(Fy, Fym), omega_y(y, th, q)) < 1e-6);
        }
    }
}

TEST_CASE("flat Clifford torus") {
    const cplx r1 = unit_sqrt(cplx(0, 1)), r2 = unit_sqrt(cplx(0, -1));
    const auto [g1, g2] = periods_from_windings(cplx(0, 1), cplx(0, -1), 1, 1, 1, -1);
    const auto r = flat_form_residuals(r1, r2, g1, g2);
    check_forms(r, false);
    CHECK(std::abs(r.mean_curvature) < 1e-6); // H = 0
    MeshOptions o;
    o.nx = o.ny = 32;
    const auto m = build_flat_mesh(r1, r2, g1, g2, o);
    CHECK(m.vertices.size() == 32u * 32u);
    CHECK(m.faces.size() == 32u * 32u);
    CHECK(m.closure_defect < 1e-10);
    for (const auto& v : m.vertices) CHECK(std::abs(norm4(v) - 1) < 1e-12);
}

TEST_CASE("flat tori of triples") {
    for (Triple t : {Triple{2, 1, 3}, Triple{3, 1, 4}, Triple{3, 2, 5}}) {
        CAPTURE(t.str());
        const auto sd = spectral_from_triple(t);
        const auto [g1, g2] = flat_triple_periods(t);
        check_forms(flat_form_residuals(sd.r1, sd.r2, g1, g2), false);
    }
}

TEST_CASE("rotational (1,0,2) at q = 0.8") {
    const auto st = rotational_state(1, 2, 0.8);
    CHECK(std::abs(omega_circle(st.sp.theta1, 0.8) - 0.5) < 1e-12);
    const SymPoints sp{st.sp.theta1, st.sp.theta2, 0};
    const auto mp = periods_for_mesh(0.8, sp, s_from_windings(st.windings));
    CHECK(std::abs(mp.g1.imag()) < 1e-12);
    check_forms(fundamental_form_residuals(0.8, sp, mp), true);
    MeshOptions o;
    o.nx = o.ny = 64;
    const auto m = build_mesh(st, o);
    CHECK(m.closure_defect < 1e-6);
    CHECK(m.vertices.size() == 64u * 64u);
}

TEST_CASE("twizzled (2,1,3) in mid-family") {
    const auto st = family_state_at({2, 1, 3}, 0.35);
    const SymPoints sp{reduce_angle(st.sp.theta1).first, reduce_angle(st.sp.theta2).first, 0};
    const auto mp = periods_for_mesh(st.point.q, sp, s_from_windings(st.windings));
    check_forms(fundamental_form_residuals(st.point.q, sp, mp), true);
    MeshOptions o;
    o.nx = o.ny = 48;
    const auto m = build_mesh(st, o);
    CHECK(m.closure_defect < 1e-6);
    for (const auto& v : m.vertices) CHECK(std::abs(norm4(v) - 1) < 1e-10);
}

TEST_CASE("stereographic projection") {
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    const Vec4 pole{-1, 0, 0, 0};
    CHECK(std::hypot(stereographic({1, 0, 0, 0})[0], stereographic({1, 0, 0, 0})[1],
                     stereographic({1, 0, 0, 0})[2]) < 1e-15);
    const auto eq = stereographic({0, 0.6, 0, 0.8});
    CHECK(std::abs(std::hypot(eq[0], eq[1], eq[2]) - 1) < 1e-14);
    CHECK_THROWS_AS(stereographic(pole), DomainError);
    for (int n = 0; n < 50; ++n) {
        Vec4 p{g(rng), g(rng), g(rng), g(rng)};
        const double r = norm4(p);
        for (auto& x : p) x /= r;
        const Vec4 other{0.5, 0.5, -0.5, 0.5};
        for (const Vec4& pl : {pole, other}) {
            const Vec4 back = inverse_stereographic(stereographic(p, pl), pl);
            for (int c = 0; c < 4; ++c) CHECK(std::abs(back[c] - p[c]) < 1e-10);
        }
    }
}

TEST_CASE("pole choice avoids the surface") {
    const std::vector<Vec4> pts{{-1, 0, 0, 0}, {1, 0, 0, 0}};
    const Vec4 p = choose_pole(pts);
    for (const auto& v : pts) {
        const double d = norm4({v[0] - p[0], v[1] - p[1], v[2] - p[2], v[3] - p[3]});
        CHECK(d > 1e-3);
    }
}

TEST_CASE("periods_for_mesh rejects inconsistent data") {
    const auto st = rotational_state(1, 2, 0.8);
    const SymPoints sp{st.sp.theta1, st.sp.theta2, 0};
    CHECK_THROWS_AS(periods_for_mesh(0.8, sp, IVec3{2, 3, 1}), NumericalError);
}
