#include "cmc/profile.hpp"
#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace cmc {

namespace {

constexpr double pi = std::numbers::pi;

struct Frame2 {
    double nu, v, dv, c, g0, g1, g2;
};

Frame2 rot_parts(double y, double q, double theta1) {
    const double nu = nu_circle(theta1, q);
    const auto dn = jacobi_dn(y, q);
    const double v = dn.v, dv = dn.dv;
    const double s2 = std::sin(2 * theta1), c2 = std::cos(2 * theta1);
    const double cc2 = v * v - 2 * q * c2 + q * q / (v * v);
    if (!(cc2 > 0)) throw NumericalError("profile_rotational: c^2 must be positive", cc2);
    const double c = std::sqrt(cc2);
    return {nu, v, dv, c, 0.5 * v * s2 / nu, (v * c2 - q / v) / c, 0.5 * dv * s2 / (c * nu)};
}

RotationalProfileSample rot_sample(double y, double q, double theta1, double chi0) {
    const Frame2 p = rot_parts(y, q, theta1);
    RotationalProfileSample s;
    s.chi0 = chi0;
    s.g0 = p.g0;
    s.g1 = p.g1;
    s.g2 = p.g2;
    s.c = p.c;
    const cplx w = std::exp(cplx(0, chi0)) * cplx(p.g1, p.g2);
    s.point = {w.real(), w.imag(), 0, p.g0};
    const double s2 = std::sin(2 * theta1), c2 = std::cos(2 * theta1);
    s.psi_prime = 2 * p.nu * s2 * (p.v * p.v * c2 - q) / (p.v * p.v * s2 * s2 - 4 * p.nu * p.nu);
    s.kappa = 8 * p.nu * p.nu * q / (p.c * p.c * p.c * p.v);
    return s;
}

void check_rotational(double q, double theta1) {
    if (!(q > 0 && q <= 1)) throw DomainError("profile_rotational: q must lie in (0, 1]");
    if (!(theta1 > 0 && theta1 <= pi / 2)) throw DomainError("profile_rotational: theta1 must lie in (0, pi/2]");
}

} // namespace

RotationalProfileSample profile_rotational(double y, double q, double theta1) {
    check_rotational(q, theta1);
    // the profile angle runs opposite to the frame angle chi0 of the surface module
    return rot_sample(y, q, theta1, -chi0_increment(0, y, theta1, q));
}

ProfileCurve rotational_profile_curve(double q, double theta1, int periods, int n) {
    check_rotational(q, theta1);
    if (periods < 1 || n < 8) throw DomainError("rotational_profile_curve: need periods >= 1 and n >= 8");
    const double kp = elliptic_KE_comp(q).kk;
    const double len = 2.0 * periods * kp;
    ProfileCurve out;
    out.points.reserve(n);
    double chi0 = 0, yprev = 0;
    for (int i = 0; i < n; ++i) {
        const double y = len * double(i) / n;
        if (i > 0) chi0 -= chi0_increment(yprev, y, theta1, q);
        yprev = y;
        const auto s = rot_sample(y, q, theta1, chi0);
        out.points.push_back({s.point[0], s.point[1]});
    }
    out.closed = true;
    out.turning = turning_number(out.points);
    return out;
}

ProfileCurve rotational_profile_curve(std::int64_t l0, std::int64_t l2, double q, int n) {
    if (!Triple{l0, 0, l2}.valid()) throw DomainError("rotational_profile_curve: need coprime 0 < l0 < l2");
    const double r = double(l0) / double(l2);
    double theta1;
    if (q == 1.0) {
        theta1 = std::acos(r);
    } else {
        double lo = 0, hi = pi / 2;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (omega_circle(mid, q) > r ? lo : hi) = mid;
        }
        theta1 = 0.5 * (lo + hi);
    }
    return rotational_profile_curve(q, theta1, int(l2), n);
}

int turning_number(const std::vector<Point2>& pts) {
    const std::size_t n = pts.size();
    if (n < 3) throw DomainError("turning_number: need at least three points");
    double scale = 0;
    for (const auto& p : pts) scale = std::max(scale, std::hypot(p[0], p[1]));
    std::vector<double> ang(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % n];
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        if (std::hypot(dx, dy) <= 1e-14 * (1 + scale)) throw DomainError("turning_number: curve is not immersed");
        ang[i] = std::atan2(dy, dx);
    }
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = ang[(i + 1) % n] - ang[i];
        d = std::remainder(d, 2 * pi);
        if (std::abs(d) > pi - 1e-9) throw DomainError("turning_number: cusp in the polyline");
        total += d;
    }
    const double w = total / (2 * pi);
    const double r = std::round(w);
    if (std::abs(w - r) > 1e-6) throw NumericalError("turning_number: tangent winding not integral", w - r);
    return int(std::abs(r));
}

int turning_number(const ProfileCurve& curve) { return turning_number(curve.points); }

int total_turning(const std::vector<ProfileCurve>& curves) {
    int s = 0;
    for (const auto& c : curves) s += c.turning;
    return s;
}

std::vector<ProfileCurve> extract_profiles(const SurfaceMesh& mesh, int which) {
    if (which != 1 && which != 2) throw DomainError("extract_profiles: which must be 1 or 2");
    const int nx = mesh.nx, ny = mesh.ny;
    if (nx < 3 || ny < 3 || mesh.vertices.size() != std::size_t(nx) * ny)
        throw DomainError("extract_profiles: mesh grid does not match its dimensions");
    // level component, hemisphere component, and the remaining pair
    const int lv = which == 1 ? 0 : 2, hs = which == 1 ? 1 : 3, o1 = which == 1 ? 2 : 0, o2 = which == 1 ? 3 : 1;
    auto at = [&](int i, int j) -> const Vec4& {
        return mesh.vertices[std::size_t((j % ny + ny) % ny) * nx + (i % nx + nx) % nx];
    };
    auto pos = [&](int i, int j) { return at(i, j)[lv] >= 0; };
    // edge ids: 2*(j*nx+i) horizontal (i,j)-(i+1,j), +1 vertical (i,j)-(i,j+1)
    auto hid = [&](int i, int j) { return 2 * (((j % ny + ny) % ny) * nx + (i % nx + nx) % nx); };
    auto vid = [&](int i, int j) { return hid(i, j) + 1; };
    std::unordered_map<int, std::array<int, 2>> adj;
    auto link = [&](int a, int b) {
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            auto it = adj.find(x);
            if (it == adj.end()) {
                adj[x] = {y, -1};
            } else if (it->second[1] < 0) {
                it->second[1] = y;
            } else {
                throw NumericalError("extract_profiles: contour branches, refine the grid");
            }
        }
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const bool c0 = pos(i, j), c1 = pos(i + 1, j), c2 = pos(i + 1, j + 1), c3 = pos(i, j + 1);
            const int e[4] = {hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)};
            const bool cut[4] = {c0 != c1, c1 != c2, c3 != c2, c0 != c3};
            const int ncut = cut[0] + cut[1] + cut[2] + cut[3];
            if (ncut == 2) {
                int a = -1, b = -1;
                for (int k = 0; k < 4; ++k)
                    if (cut[k]) (a < 0 ? a : b) = e[k];
                link(a, b);
            } else if (ncut == 4) {
                const double centre =
                    0.25 * (at(i, j)[lv] + at(i + 1, j)[lv] + at(i + 1, j + 1)[lv] + at(i, j + 1)[lv]);
                if ((centre >= 0) == c0) {
                    link(e[0], e[1]);
                    link(e[2], e[3]);
                } else {
                    link(e[0], e[3]);
                    link(e[1], e[2]);
                }
            }
        }
    // crossing point on an edge, pushed onto the level sphere
    auto crossing = [&](int id) -> Vec3 {
        const int cell = id / 2, i = cell % nx, j = cell / nx;
        const Vec4& a = at(i, j);
        const Vec4& b = (id % 2 == 0) ? at(i + 1, j) : at(i, j + 1);
        const double s = a[lv] / (a[lv] - b[lv]);
        Vec3 p{a[hs] + s * (b[hs] - a[hs]), a[o1] + s * (b[o1] - a[o1]), a[o2] + s * (b[o2] - a[o2])};
        const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        for (auto& x : p) x /= r;
        return p;
    };
    std::vector<ProfileCurve> out;
    std::unordered_map<int, bool> seen;
    std::vector<int> ids;
    ids.reserve(adj.size());
    for (const auto& kv : adj) ids.push_back(kv.first);
    std::sort(ids.begin(), ids.end()); // deterministic traversal order
    for (int start : ids) {
        if (seen[start]) continue;
        std::vector<int> loop;
        int prev = -1, cur = start;
        for (;;) {
            seen[cur] = true;
            loop.push_back(cur);
            const auto& nb = adj.at(cur);
            if (nb[1] < 0) throw NumericalError("extract_profiles: open contour, refine the grid");
            const int next = (nb[0] != prev) ? nb[0] : nb[1];
            prev = cur;
            cur = next;
            if (cur == start) break;
            if (seen[cur]) throw NumericalError("extract_profiles: contour does not close");
        }
        int up = 0, down = 0;
        std::vector<Vec3> pts;
        pts.reserve(loop.size());
        for (int id : loop) {
            pts.push_back(crossing(id));
            (pts.back()[0] > 0 ? up : down)++;
        }
        if (up > 0 && down > 0) throw DomainError("extract_profiles: profile curve set meets the axis");
        if (up == 0) continue;
        ProfileCurve c;
        for (const auto& p : pts) {
            const Point2 w{p[1] / (1 + p[0]), p[2] / (1 + p[0])};
            if (!c.points.empty() && std::hypot(w[0] - c.points.back()[0], w[1] - c.points.back()[1]) < 1e-12)
                continue;
            c.points.push_back(w);
        }
        while (c.points.size() > 1 &&
               std::hypot(c.points.front()[0] - c.points.back()[0], c.points.front()[1] - c.points.back()[1]) < 1e-12)
            c.points.pop_back();
        c.closed = true;
        c.turning = turning_number(c.points);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace cmc
