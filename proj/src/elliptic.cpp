#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace cmc {

namespace {

constexpr double pi = std::numbers::pi;

// K and E for modulus k given both k and its complement kc = sqrt(1-k^2),
// so callers can supply whichever is known without cancellation.
EllipticPair agm_pair(double k, double kc) {
    double a = 1.0, b = kc, c = k;
    double sum = 0.5 * c * c; // 2^{n-1} c_n^2 at n = 0
    double pw = 0.5;
    for (int i = 0; i < 60; ++i) {
        if (std::abs(a - b) <= 1e-16 * a) break;
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pw *= 2.0;
        sum += pw * c * c;
    }
    const double kk = pi / (2.0 * a);
    return {kk, kk * (1.0 - sum)};
}

// Hypergeometric coefficients c_n = ((2n-1)!!/(2n)!!)^2 so that
// K = pi/2 sum c_n p^n and E = pi/2 sum c_n p^n / (1-2n) for parameter p.
constexpr int kSeriesTerms = 90;
const std::array<double, kSeriesTerms>& series_c() {
    static const std::array<double, kSeriesTerms> c = [] {
        std::array<double, kSeriesTerms> out{};
        double r = 1.0;
        out[0] = 1.0;
        for (int n = 1; n < kSeriesTerms; ++n) {
            r *= (2.0 * n - 1.0) / (2.0 * n);
            out[n] = r * r;
        }
        return out;
    }();
    return c;
}

// Partial sums for |p| <= 1/2 converge to machine precision well within the table.
EllipticPair series_pair(double p) {
    const auto& c = series_c();
    double kk = 0, ee = 0, pn = 1;
    for (int n = 0; n < kSeriesTerms; ++n) {
        kk += c[n] * pn;
        ee += c[n] * pn / (1.0 - 2.0 * n);
        pn *= p;
        if (std::abs(pn) < 1e-19) break;
    }
    return {0.5 * pi * kk, 0.5 * pi * ee};
}

} // namespace

EllipticPair elliptic_KE(double q) {
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("elliptic_KE: modulus must lie in [0,1)");
    return agm_pair(q, std::sqrt((1.0 - q) * (1.0 + q)));
}

EllipticPair elliptic_KE_comp(double q) {
    const double a = std::abs(q);
    if (a == 0.0) throw DomainError("elliptic_KE_comp: K' diverges at q = 0");
    if (!(a <= 1.0)) throw DomainError("elliptic_KE_comp: |q| must not exceed 1");
    if (a == 1.0) return {0.5 * pi, 0.5 * pi};
    // modulus sqrt(1-q^2), complement |q|
    return agm_pair(std::sqrt((1.0 - a) * (1.0 + a)), a);
}

EllipticPair elliptic_KE_comp_ext(double q) {
    const double a = std::abs(q);
    const double p = (1.0 - a) * (1.0 + a);
    if (a <= 1.0) return elliptic_KE_comp(q);
    if (p < -0.5) throw DomainError("elliptic_KE_comp_ext: |1-q^2| must not exceed 1/2");
    return series_pair(p);
}

FlowCoefficients flow_coefficients(double q) {
    const double a = std::abs(q);
    if (a == 0.0) throw DomainError("flow_coefficients: singular at q = 0");
    const double p = (1.0 - a) * (1.0 + a);
    FlowCoefficients out{};
    if (std::abs(p) <= 0.5) {
        // a*p = (2-p)E' - 2(1-p)K',  b*p = 2E' - (2-p)K'; constant and linear terms cancel.
        const auto& c = series_c();
        double sa = 0, sb = 0, pn = 1; // pn = p^{n-1}
        double kk = 0, ee = 0, pk = 1;
        for (int n = 0; n < kSeriesTerms; ++n) {
            kk += c[n] * pk;
            ee += c[n] * pk / (1.0 - 2.0 * n);
            pk *= p;
        }
        for (int n = 2; n < kSeriesTerms; ++n) {
            pn *= p;
            const double en = c[n] / (1.0 - 2.0 * n);
            const double en1 = c[n - 1] / (1.0 - 2.0 * (n - 1));
            const double alpha = 2.0 * en - en1 - 2.0 * c[n] + 2.0 * c[n - 1];
            const double beta = 2.0 * en - 2.0 * c[n] + c[n - 1];
            sa += alpha * pn; // pn = p^{n-1}
            sb += beta * pn;
            if (std::abs(pn) < 1e-19) break;
        }
        out.kp = 0.5 * pi * kk;
        out.ep = 0.5 * pi * ee;
        out.a = 0.5 * pi * sa;
        out.b = 0.5 * pi * sb;
        return out;
    }
    const auto ke = elliptic_KE_comp(q);
    const double q2 = a * a;
    out.kp = ke.kk;
    out.ep = ke.ee;
    out.a = ((1.0 + q2) * ke.ee - 2.0 * q2 * ke.kk) / p;
    out.b = (2.0 * ke.ee - (1.0 + q2) * ke.kk) / p;
    return out;
}

namespace {

// dn(u | m) and its u-derivative for m1 = 1-m tiny: first-order expansion in m1
// about the sech limit, valid for |u| <= K/2.
DnValue dn_near_sech(double u, double m1) {
    const double ch = std::cosh(u), sh = std::sinh(u);
    const double sech = 1.0 / ch;
    const double g = sh * sh / ch + u * sh / (ch * ch);
    const double dg = (2.0 * sh * ch * ch - sh * sh * sh) / (ch * ch) + sh / (ch * ch) +
                      u * (ch * ch - 2.0 * sh * sh) / (ch * ch * ch);
    return {sech + 0.25 * m1 * g, -sech * std::tanh(u) + 0.25 * m1 * dg};
}

} // namespace

DnValue jacobi_dn(double y, double q) {
    const double a = std::abs(q);
    if (a > 1.0) throw DomainError("jacobi_dn: |q| must not exceed 1");
    if (a == 1.0) return {1.0, 0.0};
    if (a == 0.0) {
        const double s = 1.0 / std::cosh(y);
        return {s, -s * std::tanh(y)};
    }
    const double m = (1.0 - a) * (1.0 + a);
    if (a * a < 2e-12) {
        // near the sech limit: reduce into [0, K'] and use dn(u)dn(K'-u) = q there
        const double kp = elliptic_KE_comp(a).kk;
        double u = std::fmod(std::abs(y), 2.0 * kp);
        double sign = (y < 0) ? -1.0 : 1.0;
        if (u > kp) {
            u = 2.0 * kp - u;
            sign = -sign;
        }
        DnValue d;
        if (u <= 0.5 * kp) {
            d = dn_near_sech(u, a * a);
        } else {
            const DnValue e = dn_near_sech(kp - u, a * a);
            d = {a / e.v, a * e.dv / (e.v * e.v)};
        }
        return {d.v, sign * d.dv};
    }
    // descending Landen / AGM scheme for sn, cn, dn
    double emc = a * a;
    std::array<double, 16> em{}, en{};
    double aa = 1.0, c = 1.0, dn = 1.0;
    int l = 0;
    for (int i = 0; i < 16; ++i) {
        l = i;
        em[i] = aa;
        emc = std::sqrt(emc);
        en[i] = emc;
        c = 0.5 * (aa + emc);
        if (std::abs(aa - emc) <= 1e-15 * aa) break;
        emc *= aa;
        aa = c;
    }
    double u = c * y;
    double sn = std::sin(u), cn = std::cos(u);
    if (sn != 0.0) {
        double t = cn / sn;
        c *= t;
        for (int ii = l; ii >= 0; --ii) {
            const double b = em[ii];
            t *= c;
            c *= dn;
            dn = (en[ii] + t) / (b + t);
            t = c / b;
        }
        t = 1.0 / std::sqrt(c * c + 1.0);
        sn = (sn >= 0.0) ? t : -t;
        cn = c * sn;
    }
    return {dn, -m * sn * cn};
}

} // namespace cmc
