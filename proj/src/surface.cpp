#include "cmc/surface.hpp"
#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <thread>

namespace cmc {

namespace {

constexpr double pi = std::numbers::pi;

void parallel_rows(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

double dist(const Quat& a, const Quat& b) {
    return std::sqrt((a.a - b.a) * (a.a - b.a) + (a.b - b.b) * (a.b - b.b) + (a.c - b.c) * (a.c - b.c) +
                     (a.d - b.d) * (a.d - b.d));
}

Quat sub(const Quat& a, const Quat& b) { return {a.a - b.a, a.b - b.b, a.c - b.c, a.d - b.d}; }
Quat scale(const Quat& a, double s) { return {a.a * s, a.b * s, a.c * s, a.d * s}; }

double dot4(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

Vec4 v4sub(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

double det3(double a, double b, double c, double d, double e, double f, double g, double h, double i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// vector orthogonal to a, b, c with det[a, b, c, n] = |n|^2 > 0
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
    Vec4 n;
    for (int k = 0; k < 4; ++k) {
        int idx[3], m = 0;
        for (int j = 0; j < 4; ++j)
            if (j != k) idx[m++] = j;
        const double minor = det3(a[idx[0]], a[idx[1]], a[idx[2]], b[idx[0]], b[idx[1]], b[idx[2]], c[idx[0]],
                                  c[idx[1]], c[idx[2]]);
        n[k] = ((k % 2) ? 1.0 : -1.0) * minor;
    }
    return n;
}

// finite-difference fundamental forms of an immersion g(x, y) with the
// normal oriented by det[f, f_x, f_y, N] < 0
struct LocalForms {
    double E, F, G, H;
    cplx Q;
    double unit;
};

LocalForms local_forms(const std::function<Vec4(double, double)>& g, double x, double y, double e) {
    const Vec4 f0 = g(x, y);
    const Vec4 xp = g(x + e, y), xm = g(x - e, y), yp = g(x, y + e), ym = g(x, y - e);
    const Vec4 pp = g(x + e, y + e), pm = g(x + e, y - e), mp = g(x - e, y + e), mm = g(x - e, y - e);
    Vec4 fx, fy, fxx, fyy, fxy;
    for (int k = 0; k < 4; ++k) {
        fx[k] = (xp[k] - xm[k]) / (2 * e);
        fy[k] = (yp[k] - ym[k]) / (2 * e);
        fxx[k] = (xp[k] - 2 * f0[k] + xm[k]) / (e * e);
        fyy[k] = (yp[k] - 2 * f0[k] + ym[k]) / (e * e);
        fxy[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * e * e);
    }
    Vec4 n = cross4(f0, fx, fy);
    const double nn = std::sqrt(dot4(n, n));
    for (auto& c : n) c = -c / nn;
    LocalForms lf;
    lf.E = dot4(fx, fx);
    lf.F = dot4(fx, fy);
    lf.G = dot4(fy, fy);
    Vec4 lap;
    for (int k = 0; k < 4; ++k) lap[k] = fxx[k] + fyy[k];
    lf.H = dot4(lap, n) / (lf.E + lf.G);
    lf.Q = 0.25 * cplx(dot4(fxx, n) - dot4(fyy, n), -2 * dot4(fxy, n));
    lf.unit = std::abs(std::sqrt(dot4(f0, f0)) - 1);
    return lf;
}

FrameSample frame_sample_local(double y, double theta, double q) {
    if (!(q > 0 && q <= 1)) throw DomainError("frame_angles: q must lie in (0, 1]");
    const auto dn = jacobi_dn(y, q);
    const double n = nu_circle(theta, q);
    if (n <= 0) throw DomainError("frame_angles: nu vanishes at a branch point");
    const cplx lam = std::polar(1.0, 2 * theta);
    FrameSample s;
    s.y = y;
    s.v = dn.v;
    s.dv = dn.dv;
    s.x1c = lam * dn.v - q / dn.v;
    s.x2c = dn.v / lam - q / dn.v;
    s.j1 = -q / (dn.v * s.x1c);
    s.j2 = -q / (dn.v * s.x2c);
    s.chi1 = std::atan2(-std::abs(s.x1c) / (2 * n), -dn.dv / (2 * n * dn.v));
    s.chi2 = std::arg(s.x1c);
    s.chi0 = 0;
    return s;
}

double expected_H(double theta1, double theta2) {
    const double d = theta1 - theta2;
    return std::cos(d) / std::sin(d);
}

} // namespace

Quat Quat::operator*(const Quat& o) const {
    return {a * o.a - b * o.b - c * o.c - d * o.d, a * o.b + b * o.a + c * o.d - d * o.c,
            a * o.c - b * o.d + c * o.a + d * o.b, a * o.d + b * o.c - c * o.b + d * o.a};
}

Quat exp_i(double phi) { return {std::cos(phi), std::sin(phi), 0, 0}; }
Quat exp_j(double phi) { return {std::cos(phi), 0, std::sin(phi), 0}; }

Quat quat_exp(const Quat& u) {
    const double r = std::sqrt(u.b * u.b + u.c * u.c + u.d * u.d);
    const double s = (r < 1e-300) ? 1.0 : std::sin(r) / r;
    const double ea = std::exp(u.a);
    return {ea * std::cos(r), ea * s * u.b, ea * s * u.c, ea * s * u.d};
}

double chi0_density(double y, double theta, double q) {
    const auto dn = jacobi_dn(y, q);
    const cplx lam = std::polar(1.0, 2 * theta);
    const cplx x1 = lam * dn.v - q / dn.v;
    return -4 * nu_circle(theta, q) * q * std::sin(2 * theta) / std::norm(x1);
}

double chi0_increment(double y0, double y1, double theta, double q) {
    if (y0 == y1) return 0;
    return quad([&](double t) { return chi0_density(t, theta, q); }, y0, y1, 1e-13);
}

FrameSample frame_angles(double y, double theta, double q) {
    FrameSample s = frame_sample_local(y, theta, q);
    s.chi0 = chi0_increment(0, y, theta, q);
    return s;
}

Quat frame_P(const FrameSample& s) { return exp_i(0.5 * s.chi0) * exp_j(0.5 * s.chi1) * exp_i(0.5 * s.chi2); }

Quat frame(double x, double y, double theta, double q) {
    return exp_i(x * nu_circle(theta, q)) * frame_P(frame_angles(y, theta, q));
}

Quat omega_x(double y, double theta, double q) {
    const auto dn = jacobi_dn(y, q);
    const cplx lam = std::polar(1.0, 2 * theta);
    const cplx x2 = dn.v / lam - q / dn.v;
    const cplx beta = cplx(0, -0.5) * x2;
    return {0, -dn.dv / (2 * dn.v), beta.real(), beta.imag()};
}

Quat omega_y(double y, double theta, double q) {
    const auto dn = jacobi_dn(y, q);
    const cplx lam = std::polar(1.0, 2 * theta);
    const cplx beta = 0.5 * (dn.v / lam + q / dn.v);
    return {0, 0, beta.real(), beta.imag()};
}

Quat immersion(double x, double y, double q, const SymPoints& sp) {
    return frame(x, y, sp.theta1, q) * frame(x, y, sp.theta2, q).conj();
}

Quat flat_frame(cplx z, cplx root) {
    const cplx lam = root * root;
    const cplx a = z / lam + std::conj(z);
    const cplx beta = cplx(0, pi) * a; // upper right entry of pi i A
    return quat_exp({0, 0, beta.real(), beta.imag()});
}

Quat flat_immersion(cplx z, cplx r1, cplx r2) { return flat_frame(z, r1) * flat_frame(z, r2).conj(); }

IVec3 s_from_windings(const IMat23& w) {
    IVec3 s{w[0][1] * w[1][2] - w[0][2] * w[1][1], w[0][2] * w[1][0] - w[0][0] * w[1][2],
            w[0][0] * w[1][1] - w[0][1] * w[1][0]};
    const std::int64_t g = gcd3(s[0], s[1], s[2]);
    if (g == 0) throw DomainError("s_from_windings: dependent winding rows");
    for (auto& x : s) x /= g;
    return s;
}

MeshPeriods periods_for_mesh(double q, const SymPoints& sp, const IVec3& s, double tol) {
    if (!(q > 0 && q < 1)) throw DomainError("periods_for_mesh: q must lie in (0, 1)");
    const auto no = nu_omega(q, sp);
    const double kp = elliptic_KE_comp(q).kk;
    MeshPeriods mp;
    mp.windings = closing_windings(s);
    double xs[2];
    for (int j = 0; j < 2; ++j) {
        const auto& p = mp.windings[j];
        const double xa = (double(p[1]) - double(p[0]) * no.omega1) / no.nu1;
        const double xb = (double(p[2]) - double(p[0]) * no.omega2) / no.nu2;
        mp.consistency = std::max(mp.consistency, std::abs(xa - xb));
        xs[j] = xa;
    }
    if (!(mp.consistency <= tol))
        throw NumericalError("periods_for_mesh: sym points do not close with this s-vector", mp.consistency);
    mp.x1 = xs[0];
    mp.x2 = xs[1];
    mp.g1 = cplx(xs[0] * pi, -2.0 * double(mp.windings[0][0]) * kp);
    mp.g2 = cplx(xs[1] * pi, -2.0 * double(mp.windings[1][0]) * kp);
    return mp;
}

int default_threads() {
    if (const char* env = std::getenv("CMC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Vec3 stereographic(const Vec4& p, const Vec4& pole) {
    const double t = 1 - dot4(p, pole);
    if (t < 1e-14) throw DomainError("stereographic: point at the pole");
    // coordinates in the hyperplane orthogonal to the pole, using a fixed basis
    Vec4 w = p;
    const double c = dot4(p, pole);
    for (int k = 0; k < 4; ++k) w[k] -= c * pole[k];
    // orthonormal basis of pole^perp by Gram-Schmidt on the unit vectors
    std::vector<Vec4> basis;
    for (int e = 0; e < 4 && basis.size() < 3; ++e) {
        Vec4 u{0, 0, 0, 0};
        u[e] = 1;
        const double pu = dot4(u, pole);
        for (int k = 0; k < 4; ++k) u[k] -= pu * pole[k];
        for (const auto& b : basis) {
            const double d = dot4(u, b);
            for (int k = 0; k < 4; ++k) u[k] -= d * b[k];
        }
        const double nu = std::sqrt(dot4(u, u));
        if (nu < 1e-8) continue;
        for (auto& x : u) x /= nu;
        basis.push_back(u);
    }
    return {dot4(w, basis[0]) / t, dot4(w, basis[1]) / t, dot4(w, basis[2]) / t};
}

Vec4 inverse_stereographic(const Vec3& x, const Vec4& pole) {
    std::vector<Vec4> basis;
    for (int e = 0; e < 4 && basis.size() < 3; ++e) {
        Vec4 u{0, 0, 0, 0};
        u[e] = 1;
        const double pu = dot4(u, pole);
        for (int k = 0; k < 4; ++k) u[k] -= pu * pole[k];
        for (const auto& b : basis) {
            const double d = dot4(u, b);
            for (int k = 0; k < 4; ++k) u[k] -= d * b[k];
        }
        const double nu = std::sqrt(dot4(u, u));
        if (nu < 1e-8) continue;
        for (auto& c : u) c /= nu;
        basis.push_back(u);
    }
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    Vec4 p;
    for (int k = 0; k < 4; ++k)
        p[k] = (2 * (x[0] * basis[0][k] + x[1] * basis[1][k] + x[2] * basis[2][k]) + (r2 - 1) * pole[k]) / (r2 + 1);
    return p;
}

Vec4 choose_pole(const std::vector<Vec4>& vertices, double min_dist) {
    auto mind = [&](const Vec4& pole) {
        double m = 1e300;
        for (const auto& v : vertices) m = std::min(m, std::sqrt(dot4(v4sub(v, pole), v4sub(v, pole))));
        return m;
    };
    const Vec4 def{-1, 0, 0, 0};
    if (mind(def) >= min_dist) return def;
    std::vector<Vec4> cands;
    for (int k = 0; k < 4; ++k)
        for (double s : {1.0, -1.0}) {
            Vec4 u{0, 0, 0, 0};
            u[k] = s;
            cands.push_back(u);
        }
    for (int m = 0; m < 16; ++m)
        cands.push_back({(m & 1) ? 0.5 : -0.5, (m & 2) ? 0.5 : -0.5, (m & 4) ? 0.5 : -0.5, (m & 8) ? 0.5 : -0.5});
    Vec4 best = def;
    double bd = -1;
    for (const auto& c : cands) {
        const double d = mind(c);
        if (d > bd) {
            bd = d;
            best = c;
        }
    }
    return best;
}

namespace {

void finish_mesh(SurfaceMesh& m, int threads) {
    m.faces.clear();
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) {
            const int i1 = (i + 1) % m.nx, j1 = (j + 1) % m.ny;
            m.faces.push_back({j * m.nx + i, j * m.nx + i1, j1 * m.nx + i1, j1 * m.nx + i});
        }
    m.pole = choose_pole(m.vertices);
    m.projected.assign(m.vertices.size(), Vec3{0, 0, 0});
    parallel_rows(m.ny, threads, [&](int j) {
        for (int i = 0; i < m.nx; ++i) m.projected[j * m.nx + i] = stereographic(m.vertices[j * m.nx + i], m.pole);
    });
}

} // namespace

SurfaceMesh build_mesh(double q, const SymPoints& sp, const MeshPeriods& periods, const MeshOptions& opts) {
    if (opts.nx < 3 || opts.ny < 3) throw DomainError("build_mesh: resolution must be at least 3x3");
    if (std::abs(periods.g1.imag()) > 1e-12 * (1 + std::abs(periods.g1)))
        throw DomainError("build_mesh: the first period must be real");
    const int threads = opts.threads > 0 ? opts.threads : default_threads();
    SurfaceMesh m;
    m.nx = opts.nx;
    m.ny = opts.ny;
    m.q = q;
    m.theta1 = sp.theta1;
    m.theta2 = sp.theta2;
    m.g1 = periods.g1;
    m.g2 = periods.g2;
    const double th[2] = {sp.theta1, sp.theta2};
    const double nus[2] = {nu_circle(th[0], q), nu_circle(th[1], q)};
    // frame factors P_k(y_j) with chi0 accumulated row by row
    std::vector<std::array<Quat, 2>> rowP(m.ny);
    std::vector<double> ys(m.ny);
    for (int j = 0; j < m.ny; ++j) ys[j] = periods.g2.imag() * double(j) / m.ny;
    std::vector<std::array<double, 2>> incr(m.ny, {0, 0});
    parallel_rows(m.ny, threads, [&](int j) {
        if (j == 0) return;
        for (int k = 0; k < 2; ++k) incr[j][k] = chi0_increment(ys[j - 1], ys[j], th[k], q);
    });
    double chi0[2] = {0, 0}, prev2[2] = {0, 0};
    for (int j = 0; j < m.ny; ++j)
        for (int k = 0; k < 2; ++k) {
            chi0[k] += incr[j][k];
            FrameSample s = frame_sample_local(ys[j], th[k], q);
            if (j > 0 && std::abs(s.chi2 - prev2[k]) > pi / 2)
                throw NumericalError("build_mesh: branch jump in chi2, refine the grid", s.chi2 - prev2[k]);
            prev2[k] = s.chi2;
            s.chi0 = chi0[k];
            rowP[j][k] = frame_P(s);
        }
    m.vertices.assign(std::size_t(m.nx) * m.ny, Vec4{});
    parallel_rows(m.ny, threads, [&](int j) {
        const double v = double(j) / m.ny;
        for (int i = 0; i < m.nx; ++i) {
            const double u = double(i) / m.nx;
            const double x = u * periods.g1.real() + v * periods.g2.real();
            const Quat f = (exp_i(x * nus[0]) * rowP[j][0]) * (exp_i(x * nus[1]) * rowP[j][1]).conj();
            m.vertices[std::size_t(j) * m.nx + i] = to_vec4(f);
        }
    });
    // closure at boundary samples
    double defect = 0;
    for (int s = 0; s < 8; ++s) {
        const double u = (s + 0.5) / 8, v = std::fmod(0.37 * s + 0.11, 1.0);
        const cplx z = u * periods.g1 + v * periods.g2;
        const Quat f0 = immersion(z.real(), z.imag(), q, sp);
        for (const cplx g : {periods.g1, periods.g2}) {
            const cplx w = z + g;
            defect = std::max(defect, dist(immersion(w.real(), w.imag(), q, sp), f0));
        }
    }
    m.closure_defect = defect;
    if (!(defect < opts.closure_tol)) throw NumericalError("build_mesh: surface does not close", defect);
    finish_mesh(m, threads);
    return m;
}

SurfaceMesh build_mesh(const FlowState& state, const MeshOptions& opts) {
    const double q = state.point.q;
    if (!(q > 0 && q < 1)) throw DomainError("build_mesh: flow state must have 0 < q < 1");
    // branch representatives pair with the branch windings of the state
    const SymPoints sp{reduce_angle(state.sp.theta1).first, reduce_angle(state.sp.theta2).first, 0};
    const auto periods = periods_for_mesh(q, sp, s_from_windings(state.windings), 1e-6);
    return build_mesh(q, sp, periods, opts);
}

SurfaceMesh build_flat_mesh(cplx r1, cplx r2, cplx g1, cplx g2, const MeshOptions& opts) {
    if (opts.nx < 3 || opts.ny < 3) throw DomainError("build_flat_mesh: resolution must be at least 3x3");
    const int threads = opts.threads > 0 ? opts.threads : default_threads();
    SurfaceMesh m;
    m.nx = opts.nx;
    m.ny = opts.ny;
    m.q = 1;
    m.theta1 = std::arg(r1);
    m.theta2 = std::arg(r2);
    m.g1 = g1;
    m.g2 = g2;
    m.vertices.assign(std::size_t(m.nx) * m.ny, Vec4{});
    parallel_rows(m.ny, threads, [&](int j) {
        for (int i = 0; i < m.nx; ++i) {
            const cplx z = (double(i) / m.nx) * g1 + (double(j) / m.ny) * g2;
            m.vertices[std::size_t(j) * m.nx + i] = to_vec4(flat_immersion(z, r1, r2));
        }
    });
    double defect = 0;
    for (int s = 0; s < 8; ++s) {
        const cplx z = ((s + 0.5) / 8) * g1 + std::fmod(0.37 * s + 0.11, 1.0) * g2;
        const Quat f0 = flat_immersion(z, r1, r2);
        for (const cplx g : {g1, g2}) defect = std::max(defect, dist(flat_immersion(z + g, r1, r2), f0));
    }
    m.closure_defect = defect;
    if (!(defect < opts.closure_tol)) throw NumericalError("build_flat_mesh: surface does not close", defect);
    finish_mesh(m, threads);
    return m;
}

SurfaceMesh build_flat_mesh(const Triple& t, const MeshOptions& opts) {
    const auto sd = spectral_from_triple(t);
    const auto [g1, g2] = flat_triple_periods(t);
    auto m = build_flat_mesh(sd.r1, sd.r2, g1, g2, opts);
    m.triple = t.str();
    return m;
}

FormResiduals fundamental_form_residuals(double q, const SymPoints& sp, const MeshPeriods& periods, int n) {
    FormResiduals r;
    const double h = std::cos(sp.theta1 - sp.theta2);
    const double Hx = expected_H(sp.theta1, sp.theta2);
    const cplx l1 = std::polar(1.0, 2 * sp.theta1), l2 = std::polar(1.0, 2 * sp.theta2);
    const cplx Qx = cplx(0, 0.25) * q * (1.0 / l2 - 1.0 / l1);
    const auto no = nu_omega(q, sp);
    auto g = [&](double x, double y) { return to_vec4(immersion(x, y, q, sp)); };
    const double e = 2e-4;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const cplx z = ((a + 0.31) / n) * periods.g1 + ((b + 0.17) / n) * periods.g2;
            const double x = z.real(), y = z.imag();
            const auto lf = local_forms(g, x, y, e);
            const double v = jacobi_dn(y, q).v;
            r.unit_norm = std::max(r.unit_norm, lf.unit);
            r.scale = std::max(r.scale, lf.E);
            r.conformality = std::max(r.conformality, (std::abs(lf.E - lf.G) + std::abs(lf.F)) / lf.E);
            r.metric = std::max(r.metric, std::abs(lf.E - (1 - h * h) * v * v) / lf.E);
            r.mean_curvature = std::max(r.mean_curvature, std::abs(lf.H - Hx));
            r.hopf = std::max(r.hopf, std::abs(lf.Q - Qx));
            // frame equations
            const double fe = 1e-5;
            for (double th : {sp.theta1, sp.theta2}) {
                const Quat F = frame(x, y, th, q);
                const Quat dx = scale(sub(frame(x + fe, y, th, q), frame(x - fe, y, th, q)), 0.5 / fe);
                const Quat dy = scale(sub(frame(x, y + fe, th, q), frame(x, y - fe, th, q)), 0.5 / fe);
                r.frame = std::max(r.frame, dist(F.conj() * dx, omega_x(y, th, q)));
                r.frame = std::max(r.frame, dist(F.conj() * dy, omega_y(y, th, q)));
            }
        }
    // monodromy and closure
    const cplx z0 = 0.23 * periods.g1 + 0.61 * periods.g2;
    const Quat f0 = immersion(z0.real(), z0.imag(), q, sp);
    for (int j = 0; j < 2; ++j) {
        const cplx gam = j == 0 ? periods.g1 : periods.g2;
        const double xj = j == 0 ? periods.x1 : periods.x2;
        const double p0 = double(periods.windings[j][0]);
        const cplx w = z0 + gam;
        r.closure = std::max(r.closure, dist(immersion(w.real(), w.imag(), q, sp), f0));
        const double nus[2] = {no.nu1, no.nu2}, oms[2] = {no.omega1, no.omega2};
        const double th[2] = {sp.theta1, sp.theta2};
        for (int k = 0; k < 2; ++k) {
            const Quat M = frame(w.real(), w.imag(), th[k], q) * frame(z0.real(), z0.imag(), th[k], q).conj();
            const Quat X = exp_i(pi * (xj * nus[k] + p0 * oms[k]));
            r.monodromy = std::max(r.monodromy, std::min(dist(M, X), dist(M, scale(X, -1))));
        }
    }
    return r;
}

FormResiduals flat_form_residuals(cplx r1, cplx r2, cplx g1, cplx g2, int n) {
    FormResiduals r;
    const double Hx = expected_H(std::arg(r1), std::arg(r2));
    auto g = [&](double x, double y) { return to_vec4(flat_immersion(cplx(x, y), r1, r2)); };
    const double e = 1e-4;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const cplx z = ((a + 0.31) / n) * g1 + ((b + 0.17) / n) * g2;
            const auto lf = local_forms(g, z.real(), z.imag(), e);
            r.unit_norm = std::max(r.unit_norm, lf.unit);
            r.scale = std::max(r.scale, lf.E);
            r.conformality = std::max(r.conformality, (std::abs(lf.E - lf.G) + std::abs(lf.F)) / lf.E);
            r.mean_curvature = std::max(r.mean_curvature, std::abs(lf.H - Hx));
        }
    const cplx z0 = 0.23 * g1 + 0.61 * g2;
    const Quat f0 = flat_immersion(z0, r1, r2);
    for (const cplx gam : {g1, g2}) {
        r.closure = std::max(r.closure, dist(flat_immersion(z0 + gam, r1, r2), f0));
        for (const cplx root : {r1, r2}) {
            const Quat M = flat_frame(z0 + gam, root) * flat_frame(z0, root).conj();
            r.monodromy = std::max(r.monodromy, std::min(dist(M, Quat{}), dist(M, Quat{-1, 0, 0, 0})));
        }
    }
    return r;
}

} // namespace cmc
