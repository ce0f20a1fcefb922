#include "cmc/genus0.hpp"
#include "cmc/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace cmc {

namespace {

std::int64_t iabs(std::int64_t x) { return x < 0 ? -x : x; }

} // namespace

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
    return std::gcd(std::gcd(iabs(a), iabs(b)), iabs(c));
}

bool Triple::valid() const {
    return gcd3(l0, l1, l2) == 1 && 0 <= l1 && l1 < l0 && l0 < l2;
}

std::string Triple::str() const {
    std::ostringstream os;
    os << l0 << ',' << l1 << ',' << l2;
    return os.str();
}

Triple Triple::parse(const std::string& text) {
    Triple t;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> t.l0 >> c1 >> t.l1 >> c2 >> t.l2) || c1 != ',' || c2 != ',')
        throw DomainError("triple must be written as l0,l1,l2");
    std::string rest;
    if (is >> rest) throw DomainError("triple must be written as l0,l1,l2");
    return t;
}

cplx unit_sqrt(cplx lambda) { return std::sqrt(lambda / std::abs(lambda)); }

cplx flat_log_mu(cplx z, cplx root) {
    const cplx i(0, 1);
    return M_PI * i * (z / root + std::conj(z) * root);
}

Lattice dual_lattice(const Lattice& l) {
    // columns g1, g2 of a real 2x2 matrix G; dual generators are the columns of G^{-T}
    const double a = l.g1.real(), b = l.g2.real(), c = l.g1.imag(), d = l.g2.imag();
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw DomainError("dual_lattice: degenerate lattice");
    // G^{-1} = [d -b; -c a]/det, transpose -> [d -c; -b a]/det
    return {cplx(d / det, -b / det), cplx(-c / det, a / det)};
}

std::pair<Lattice, Lattice> base_lattice_roots(cplx r1, cplx r2) {
    if (std::abs(r1 * r1 - r2 * r2) < 1e-14) throw DomainError("base_lattice: coincident sym points");
    Lattice lam{0.5 * (r1 + r2), 0.5 * (r1 - r2)};
    return {lam, dual_lattice(lam)};
}

std::pair<Lattice, Lattice> base_lattice(cplx lambda1, cplx lambda2) {
    return base_lattice_roots(unit_sqrt(lambda1), unit_sqrt(lambda2));
}

std::pair<cplx, cplx> periods_from_windings_roots(cplx r1, cplx r2, std::int64_t p11,
                                                  std::int64_t p12, std::int64_t p21,
                                                  std::int64_t p22) {
    const cplx l1 = r1 * r1, l2 = r2 * r2;
    if (std::abs(l2 - l1) < 1e-14) throw DomainError("periods_from_windings: coincident sym points");
    auto g = [&](std::int64_t a, std::int64_t b) {
        return (r1 * l2 * double(a) - l1 * r2 * double(b)) / (l2 - l1);
    };
    const cplx g1 = g(p11, p12), g2 = g(p21, p22);
    if (std::abs((g1 * std::conj(g2)).imag()) < 1e-12 * (1 + std::norm(g1) + std::norm(g2)))
        throw DomainError("periods_from_windings: collinear periods");
    return {g1, g2};
}

std::pair<cplx, cplx> periods_from_windings(cplx lambda1, cplx lambda2, std::int64_t p11,
                                            std::int64_t p12, std::int64_t p21, std::int64_t p22) {
    return periods_from_windings_roots(unit_sqrt(lambda1), unit_sqrt(lambda2), p11, p12, p21, p22);
}

std::pair<double, double> clifford_family(double t) { return {-std::tanh(t), -std::sinh(t)}; }

std::int64_t tau(const IVec3& s) {
    const std::int64_t a = s[0] * s[0] - (s[1] - s[2]) * (s[1] - s[2]);
    const std::int64_t b = s[0] * s[0] - (s[1] + s[2]) * (s[1] + s[2]);
    return a * b;
}

IVec3 s_vector(const SpectralDataFlat& sd, double tol) {
    const cplx i(0, 1);
    const cplx m[3] = {sd.r0, sd.r1, sd.r2};
    const cplx b[3] = {std::conj(sd.r0), std::conj(sd.r1), std::conj(sd.r2)};
    double v[3];
    for (int k = 0; k < 3; ++k) {
        const int a1 = (k + 1) % 3, a2 = (k + 2) % 3;
        const cplx c = i * (m[a1] * b[a2] - m[a2] * b[a1]);
        v[k] = c.real();
    }
    double big = 0;
    int ib = 0;
    for (int k = 0; k < 3; ++k)
        if (std::abs(v[k]) > big) { big = std::abs(v[k]); ib = k; }
    if (big < 1e-14) throw DomainError("s_vector: degenerate spectral data");
    // common denominator of the ratios v_k / v_big
    std::int64_t num[3], den[3], lcm = 1;
    for (int k = 0; k < 3; ++k) {
        if (!rational_recover(v[k] / v[ib], tol, 100000, num[k], den[k]))
            throw NumericalError("s_vector: spectral data does not close", v[k] / v[ib]);
        lcm = std::lcm(lcm, den[k]);
    }
    IVec3 s;
    for (int k = 0; k < 3; ++k) s[k] = num[k] * (lcm / den[k]);
    if (v[ib] < 0)
        for (auto& x : s) x = -x;
    const std::int64_t g = gcd3(s[0], s[1], s[2]);
    for (auto& x : s) x /= g;
    const std::int64_t g2 = gcd3(s[0], s[1] + s[2], s[1] - s[2]);
    for (auto& x : s) x *= 2 / g2;
    return s;
}

Triple triple_from_s(const IVec3& s) {
    if (gcd3(s[0], s[1] + s[2], s[1] - s[2]) != 2) throw DomainError("triple_from_s: s not normalised");
    if (tau(s) >= 0) throw DomainError("triple_from_s: data in the diagonal set (tau >= 0)");
    const std::int64_t a = iabs(s[1] + s[2]), b = iabs(s[1] - s[2]);
    return {iabs(s[0]) / 2, std::min(a, b) / 2, std::max(a, b) / 2};
}

Triple triple_from_spectral(const SpectralDataFlat& sd) { return triple_from_s(s_vector(sd)); }

IVec3 s_from_triple(const Triple& t) { return {2 * t.l0, t.l1 + t.l2, t.l1 - t.l2}; }

SpectralDataFlat spectral_from_triple(const Triple& t) {
    if (!t.valid()) throw DomainError("spectral_from_triple: invalid triple " + t.str());
    const IVec3 s = s_from_triple(t);
    if (tau(s) >= 0) throw DomainError("spectral_from_triple: tau(s) >= 0");
    const double s0 = double(s[0]), s1 = double(s[1]), s2 = double(s[2]);
    const double re1 = (-s0 * s0 - s1 * s1 + s2 * s2) / (2 * s0 * s1);
    cplx r1(re1, std::sqrt(std::max(0.0, 1 - re1 * re1)));
    cplx r2 = -(s0 + s1 * r1) / s2;
    r1 /= std::abs(r1);
    r2 /= std::abs(r2);
    if (r2.imag() < 0 || (r2.imag() == 0 && r2.real() < 0)) r2 = -r2;
    return {cplx(1, 0), r1, r2};
}

bool in_triple_sublattice(const Triple& t, SublatticeKind kind, std::int64_t n1, std::int64_t n2) {
    std::int64_t a = n1, b = n2;
    switch (kind) {
    case SublatticeKind::Plain: break;
    case SublatticeKind::C: b = -n2; break;
    case SublatticeKind::D: a = n2; b = n1; break;
    case SublatticeKind::DC: a = n2; b = -n1; break;
    }
    const std::int64_t r = (a * t.l1 + b * t.l2) % t.l0;
    return r == 0;
}

std::int64_t triple_sublattice_index(const Triple& t, SublatticeKind kind) {
    std::int64_t members = 0;
    for (std::int64_t n1 = 0; n1 < t.l0; ++n1)
        for (std::int64_t n2 = 0; n2 < t.l0; ++n2)
            if (in_triple_sublattice(t, kind, n1, n2)) ++members;
    return t.l0 * t.l0 / members;
}

IMat23 closing_windings(const IVec3& s) {
    if (s[0] == 0 && s[1] == 0 && s[2] == 0) throw DomainError("closing_windings: s = 0");
    // column operations turning s into (g, 0, 0); U tracks them so that s U = (g,0,0)
    IVec3 a = s;
    std::int64_t U[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    auto colop = [&](int dst, int src, std::int64_t f) { // col dst -= f * col src
        a[dst] -= f * a[src];
        for (int r = 0; r < 3; ++r) U[r][dst] -= f * U[r][src];
    };
    auto colswap = [&](int i, int j) {
        std::swap(a[i], a[j]);
        for (int r = 0; r < 3; ++r) std::swap(U[r][i], U[r][j]);
    };
    for (;;) {
        int nz = 0, piv = -1;
        for (int k = 0; k < 3; ++k)
            if (a[k] != 0) {
                ++nz;
                if (piv < 0 || iabs(a[k]) < iabs(a[piv])) piv = k;
            }
        if (nz <= 1) {
            if (piv > 0) colswap(0, piv);
            break;
        }
        for (int k = 0; k < 3; ++k)
            if (k != piv && a[k] != 0) colop(k, piv, a[k] / a[piv]);
    }
    IVec3 k1 = {U[0][1], U[1][1], U[2][1]}, k2 = {U[0][2], U[1][2], U[2][2]};
    auto odd = [](const IVec3& v) { return ((v[1] + v[2]) % 2 + 2) % 2 == 1; };
    auto add = [](const IVec3& x, const IVec3& y, std::int64_t f) {
        return IVec3{x[0] + f * y[0], x[1] + f * y[1], x[2] + f * y[2]};
    };
    if (odd(k1) && odd(k2)) {
        k2 = add(k2, k1, 1);
        k1 = add(k1, k1, 1);
    } else if (odd(k1)) {
        k1 = add(k1, k1, 1);
    } else if (odd(k2)) {
        k2 = add(k2, k2, 1);
    }
    // Euclid on the first entries so that one basis vector has p0 = 0
    while (k2[0] != 0) {
        const std::int64_t f = k1[0] / k2[0];
        k1 = add(k1, k2, -f);
        std::swap(k1, k2);
    }
    IVec3 P = k2, Q = k1;
    if (Q[0] < 0) Q = add(Q, Q, -2);
    if (P[1] < 0 || (P[1] == 0 && P[2] < 0)) P = add(P, P, -2);
    // shorten Q against P in the winding coordinates
    const double pp = double(P[1] * P[1] + P[2] * P[2]);
    if (pp > 0) {
        const double f = std::round(double(Q[1] * P[1] + Q[2] * P[2]) / pp);
        Q = add(Q, P, -static_cast<std::int64_t>(f));
    }
    return {P, Q};
}

std::pair<cplx, cplx> flat_triple_periods(const Triple& t, IMat23* windings) {
    const auto sd = spectral_from_triple(t);
    const IMat23 w = closing_windings(s_vector(sd));
    if (windings) *windings = w;
    return periods_from_windings_roots(sd.r1, sd.r2, w[0][1], w[0][2], w[1][1], w[1][2]);
}

} // namespace cmc
