#include "cmc/flow.hpp"
#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace cmc {

namespace {

constexpr double pi = std::numbers::pi;

using Vec = std::array<double, 3>;
using Rhs = std::function<Vec(const Vec&)>;

// Dormand-Prince 5(4)
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepOut {
    Vec y;
    Vec err;
};

StepOut dp_step(const Rhs& f, const Vec& y, double h) {
    auto comb = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
        Vec r = y;
        for (auto [c, k] : terms)
            for (int i = 0; i < 3; ++i) r[i] += h * c * (*k)[i];
        return r;
    };
    const Vec k1 = f(y);
    const Vec k2 = f(comb({{a21, &k1}}));
    const Vec k3 = f(comb({{a31, &k1}, {a32, &k2}}));
    const Vec k4 = f(comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec k5 = f(comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec k6 = f(comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec y5 = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec k7 = f(y5);
    Vec err;
    for (int i = 0; i < 3; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    return {y5, err};
}

double kh_level(double q, double k, double h) {
    const double d = (1 + q * q) / (2 * q) - k * h;
    return (1 - k * k) * (1 - h * h) / (d * d);
}

// theta coordinates: y = (q, theta1, theta2)
Vec twizzled_rhs(const Vec& y) {
    const double q = y[0];
    if (q <= 0) throw NumericalError("flow left q > 0", q);
    const auto fc = flow_coefficients(q);
    const double S = y[1] + y[2], D = y[1] - y[2];
    const double dq = q * (fc.ep * std::cos(S) - q * fc.kp * std::cos(D));
    const double dS = -std::sin(S) * fc.a;
    const double dD = -q * std::sin(D) * fc.b;
    return {dq, 0.5 * (dS + dD), 0.5 * (dS - dD)};
}

// k = -1: theta1 + theta2 = pi held fixed
Vec rotational_rhs(const Vec& y) {
    const double q = y[0];
    if (q <= 0) throw NumericalError("flow left q > 0", q);
    const auto fc = flow_coefficients(q);
    const double D = y[1] - y[2];
    const double dq = q * (-fc.ep - q * fc.kp * std::cos(D));
    const double dD = -q * std::sin(D) * fc.b;
    return {dq, 0.5 * dD, -0.5 * dD};
}

struct EventFn {
    EventKind kind;
    std::function<double(const Vec&)> g;
    std::function<bool()> active;
    double tag = 0;
};

std::pair<int, int> sheets(const Vec& y) {
    return {-static_cast<int>(std::floor(y[1] / pi)), -static_cast<int>(std::floor(y[2] / pi))};
}

class Tracer {
public:
    Tracer(Rhs f, const FlowOptions& o, bool rotational, IMat23 tracked)
        : f_(std::move(f)), o_(o), rot_(rotational), tracked_(tracked) {}

    FlowState make_state(double t, const Vec& y) const {
        FlowState s;
        s.t = t;
        const double k = rot_ ? -1.0 : std::cos(y[1] + y[2]);
        const double h = std::cos(y[1] - y[2]);
        s.point = {y[0], k, h};
        const auto [s1, s2] = sheets(y);
        s.sp = {y[1], y[2], s2};
        s.c = kh_level(y[0], k, h);
        s.H = mean_curvature_from_h(h);
        for (int j = 0; j < 2; ++j) {
            s.windings[j] = tracked_[j];
            s.windings[j][1] -= 2 * s1 * tracked_[j][0];
            s.windings[j][2] -= 2 * s2 * tracked_[j][0];
        }
        if (o_.periods) {
            const auto no = nu_omega(y[0], s.sp);
            s.xs.first = (double(tracked_[0][1]) - double(tracked_[0][0]) * no.omega1) / no.nu1;
            s.xs.second = (double(tracked_[1][1]) - double(tracked_[1][0]) * no.omega1) / no.nu1;
        }
        return s;
    }

    double level(const Vec& y) const {
        const double k = rot_ ? -1.0 : std::cos(y[1] + y[2]);
        return kh_level(y[0], k, std::cos(y[1] - y[2]));
    }

    // Returns h' in (0, h] where g changes sign, by bisection on single steps from y.
    double refine(const EventFn& ev, const Vec& y, double h) const {
        const double g0 = ev.g(y);
        double lo = 0, hi = h;
        for (int it = 0; it < 80 && hi - lo > 1e-15 * (1 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = ev.g(dp_step(f_, y, mid).y);
            if ((gm > 0) == (g0 > 0) && gm != 0) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    FamilyTrace run(const Vec& y0, std::vector<EventFn>& events, const std::function<bool(EventKind)>& stop) {
        FamilyTrace tr;
        tr.rotational = rot_;
        double t = 0;
        Vec y = y0;
        const double c0 = level(y0);
        tr.c = c0;
        tr.samples.push_back(make_state(t, y));
        double h = o_.first_step;
        int steps = 0;
        for (;;) {
            if (++steps > o_.max_steps || t > o_.t_max)
                throw NumericalError("flow endpoint not reached within budget", t);
            h = std::min(h, o_.max_step);
            const bool to_stop = o_.stop_time > 0 && t + h >= o_.stop_time;
            if (to_stop) h = o_.stop_time - t;
            StepOut so;
            try {
                so = dp_step(f_, y, h);
            } catch (const NumericalError&) {
                h *= 0.25;
                if (h < 1e-14) throw;
                continue;
            }
            double en = 0;
            for (int i = 0; i < 3; ++i) {
                const double sc = o_.atol + o_.rtol * std::max(std::abs(y[i]), std::abs(so.y[i]));
                en = std::max(en, std::abs(so.err[i]) / sc);
            }
            const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
            if (en > 1.0) {
                h *= fac;
                if (h < 1e-14) throw NumericalError("step size underflow", t);
                continue;
            }
            const double cn = level(so.y);
            if (c0 > 0 && std::abs(cn - level(y)) > o_.drift_tol * c0) {
                h *= 0.5;
                if (h < 1e-14) throw NumericalError("level drift cannot be controlled", cn - c0);
                continue;
            }
            // events inside the accepted step
            struct Hit {
                double dt;
                const EventFn* ev;
            };
            std::vector<Hit> hits;
            for (const auto& ev : events) {
                if (ev.active && !ev.active()) continue;
                const double ga = ev.g(y), gb = ev.g(so.y);
                if (ga == 0 || (ga > 0) == (gb > 0)) continue;
                hits.push_back({refine(ev, y, h), &ev});
            }
            std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.dt < b.dt; });
            for (const auto& hit : hits) {
                const Vec ye = dp_step(f_, y, hit.dt).y;
                FlowEvent fe{hit.ev->kind, t + hit.dt, make_state(t + hit.dt, ye), "", hit.ev->tag};
                handle_(fe, ye);
                tr.events.push_back(fe);
                if (stop(hit.ev->kind)) {
                    tr.samples.push_back(fe.state);
                    finish_drift(tr, c0);
                    final_y_ = ye;
                    return tr;
                }
            }
            t += h;
            y = so.y;
            tr.samples.push_back(make_state(t, y));
            if (to_stop) {
                finish_drift(tr, c0);
                final_y_ = y;
                stopped_ = true;
                return tr;
            }
            h *= fac;
        }
    }

    std::function<void(FlowEvent&, const Vec&)> handle_ = [](FlowEvent&, const Vec&) {};
    Vec final_y_{};
    bool stopped_ = false;

private:
    void finish_drift(FamilyTrace& tr, double c0) const {
        double m = 0;
        for (const auto& s : tr.samples)
            if (c0 > 0) m = std::max(m, std::abs(s.c - c0) / c0);
        tr.max_drift = m;
    }

    Rhs f_;
    FlowOptions o_;
    bool rot_;
    IMat23 tracked_;
};

IMat23 start_windings(const SymPoints& sp) {
    const SpectralDataFlat sd{1.0, std::polar(1.0, sp.theta1), std::polar(1.0, sp.theta2)};
    return closing_windings(s_vector(sd));
}

std::optional<Triple> recover_triple(double q, const SymPoints& sp) {
    SymPoints b{reduce_angle(sp.theta1).first, reduce_angle(sp.theta2).first, 0};
    const auto no = nu_omega(q, b);
    const double l0 = std::abs(no.nu1 * no.omega2 - no.nu2 * no.omega1);
    const double l1 = std::abs(no.nu1 - no.nu2), l2 = no.nu1 + no.nu2;
    std::int64_t n0, d0, n1, d1;
    if (!rational_recover(l0 / l2, 1e-7, 10000, n0, d0)) return std::nullopt;
    if (!rational_recover(l1 / l2, 1e-7, 10000, n1, d1)) return std::nullopt;
    const std::int64_t L = std::lcm(d0, d1);
    Triple t{n0 * (L / d0), n1 * (L / d1), L};
    const std::int64_t g = gcd3(t.l0, t.l1, t.l2);
    t = {t.l0 / g, t.l1 / g, t.l2 / g};
    if (!t.valid()) return std::nullopt;
    return t;
}

} // namespace

std::string to_string(EventKind k) {
    switch (k) {
    case EventKind::CutCrossing: return "cut-crossing";
    case EventKind::Minimal: return "minimal";
    case EventKind::Bouquet: return "bouquet";
    case EventKind::FlatEndpoint: return "flat-endpoint";
    case EventKind::Turn: return "turn";
    }
    return "?";
}

int FamilyTrace::count(EventKind k) const {
    return static_cast<int>(std::count_if(events.begin(), events.end(),
                                          [k](const FlowEvent& e) { return e.kind == k; }));
}

const FlowEvent* FamilyTrace::first(EventKind k) const {
    for (const auto& e : events)
        if (e.kind == k) return &e;
    return nullptr;
}

FieldValue vector_field(const ModuliPoint& p) {
    if (p.q == 0.0) throw DomainError("vector_field: singular at q = 0");
    const auto fc = flow_coefficients(p.q);
    const double q = p.q;
    return {q * (fc.ep * p.k - q * fc.kp * p.h), (1 - p.k * p.k) * fc.a, q * (1 - p.h * p.h) * fc.b};
}

double level_constant(const ModuliPoint& p) {
    if (p.q == 0.0) throw DomainError("level_constant: q must be nonzero");
    return kh_level(p.q, p.k, p.h);
}

FlatEndpoint flat_endpoint(const Triple& t, FlowEnd which, int sign) {
    if (!t.valid()) throw DomainError("flat_endpoint: invalid triple " + t.str());
    if (sign != 1 && sign != -1) throw DomainError("flat_endpoint: sign must be +-1");
    double h, k;
    if (which == FlowEnd::Start) {
        const double a = double(t.l1) / t.l0, b = double(t.l2) / t.l0;
        h = (2 - a * a - b * b) / (a * a - b * b);
        k = a * a * (1 + h) - 1;
    } else {
        if (t.rotational()) throw DomainError("flat_endpoint: rotational families end in a bouquet");
        const Triple p = t.partner();
        const double a = double(p.l1) / p.l0, b = double(p.l2) / p.l0;
        h = (2 - a * a - b * b) / (b * b - a * a);
        k = b * b * (1 + h) - 1;
    }
    k = std::clamp(k, -1.0, 1.0);
    FlatEndpoint e;
    e.point = {double(sign), k, sign * h};
    // theta1 = (arccos k + arccos h)/2, theta2 = (arccos k - arccos h)/2; at the end
    // theta2 is negative, i.e. lambda2 has crossed the cut once
    const double S = std::acos(k), D = std::acos(std::clamp(h, -1.0, 1.0));
    SymPoints sp{0.5 * (S + D), 0.5 * (S - D), 0};
    if (sign < 0) {
        // lambda -> -lambda
        sp.theta1 += pi / 2;
        sp.theta2 += pi / 2;
    }
    sp.sheet = -static_cast<int>(std::floor(sp.theta2 / pi));
    e.sp = sp;
    return e;
}

std::pair<double, double> endpoint_H(const Triple& t) {
    if (!t.valid()) throw DomainError("endpoint_H: invalid triple " + t.str());
    auto H = [&](double l0) {
        const double l1 = double(t.l1), l2 = double(t.l2);
        return (l1 * l1 + l2 * l2 - 2 * l0 * l0) / (2 * std::sqrt((l2 * l2 - l0 * l0) * (l0 * l0 - l1 * l1)));
    };
    const double h0 = H(double(t.l0));
    if (t.rotational()) return {h0, 1.0 / std::tan(pi * double(t.l0) / double(t.l2))};
    return {h0, -H(double(t.partner().l0))};
}

BouquetLimit bouquet_limit(std::int64_t l0, std::int64_t l2) {
    if (!(l0 >= 1 && l0 < l2) || std::gcd(l0, l2) != 1)
        throw DomainError("bouquet_limit: need coprime 1 <= l0 < l2");
    const double r = double(l0) / double(l2);
    return {0.5 * pi * (1 - r), 1.0 / std::tan(pi * r)};
}

bool has_minimal(const Triple& t) {
    if (!t.valid()) throw DomainError("has_minimal: invalid triple " + t.str());
    if (t.rotational()) return t.l2 < 2 * t.l0 && t.l2 * t.l2 > 2 * t.l0 * t.l0;
    const std::int64_t m = std::max(t.l0, t.partner().l0);
    return t.l1 * t.l1 + t.l2 * t.l2 >= 2 * m * m;
}

FamilyTrace trace_family(const Triple& t, const FlowOptions& opts) {
    if (!t.valid()) throw DomainError("trace_family: invalid triple " + t.str());
    if (t.rotational()) throw DomainError("trace_family: rotational triple, use trace_rotational");
    const auto start = flat_endpoint(t, FlowEnd::Start);
    const Vec y0 = {1.0, start.sp.theta1, start.sp.theta2};
    if (!(start.sp.theta2 > 0)) throw NumericalError("start sym points off the principal branch", start.sp.theta2);
    Tracer tracer(twizzled_rhs, opts, false, start_windings(start.sp));

    bool turned = false;
    std::vector<EventFn> evs;
    evs.push_back({EventKind::Turn, [](const Vec& y) { return twizzled_rhs(y)[0]; }, nullptr});
    evs.push_back({EventKind::Minimal, [](const Vec& y) { return std::cos(y[1] - y[2]); }, nullptr});
    for (int n = -3; n <= 4; ++n) {
        evs.push_back({EventKind::CutCrossing, [n](const Vec& y) { return y[2] - n * pi; }, nullptr, double(n)});
        evs.push_back({EventKind::CutCrossing, [n](const Vec& y) { return y[1] - n * pi; }, nullptr, double(n)});
    }
    const double qe = 1 - opts.end_eps;
    evs.push_back({EventKind::FlatEndpoint, [qe](const Vec& y) { return y[0] - qe; },
                   [&turned] { return turned; }});
    tracer.handle_ = [&](FlowEvent& e, const Vec&) {
        if (e.kind == EventKind::Turn) turned = true;
        if (e.kind == EventKind::CutCrossing) {
            e.value = e.state.sp.sheet;
            e.info = "sheet " + std::to_string(e.state.sp.sheet);
        }
        if (e.kind == EventKind::Minimal) e.info = "h = 0";
    };
    auto tr = tracer.run(y0, evs, [](EventKind k) { return k == EventKind::FlatEndpoint; });
    tr.start_triple = t;
    if (tracer.stopped_) return tr;
    // flat tori with H = 0 at either end are minimal themselves
    if (std::abs(tr.samples.front().H) < 1e-12 && tr.count(EventKind::Minimal) == 0) {
        FlowEvent e{EventKind::Minimal, 0.0, tr.samples.front(), "h = 0 at the start", 0};
        tr.events.insert(tr.events.begin(), e);
    }
    const FlowState& last = tr.samples.back();
    tr.end_triple = recover_triple(last.point.q, last.sp);
    if (!tr.end_triple) throw NumericalError("end triple not recovered", last.point.q);
    tr.events.back().info = tr.end_triple->str();
    if (std::abs(last.H) < 1e-7 && tr.count(EventKind::Minimal) == 0)
        tr.events.push_back({EventKind::Minimal, last.t, last, "h = 0 at the end", 0});
    return tr;
}

FamilyTrace trace_rotational(std::int64_t l0, std::int64_t l2, const FlowOptions& opts) {
    const Triple t{l0, 0, l2};
    if (!t.valid()) throw DomainError("trace_rotational: need coprime 0 < l0 < l2");
    const double th1 = std::acos(double(l0) / double(l2));
    const Vec y0 = {1.0, th1, pi - th1};
    Tracer tracer(rotational_rhs, opts, true, start_windings({th1, pi - th1, 0}));

    const double qs[3] = {4 * opts.q_min, 2 * opts.q_min, opts.q_min};
    double thq[3] = {0, 0, 0};
    std::vector<EventFn> evs;
    evs.push_back({EventKind::Minimal, [](const Vec& y) { return std::cos(y[1] - y[2]); }, nullptr});
    for (int i = 0; i < 3; ++i) {
        const double target = qs[i];
        evs.push_back({EventKind::Bouquet, [target](const Vec& y) { return y[0] - target; }, nullptr, double(i)});
    }
    tracer.handle_ = [&](FlowEvent& e, const Vec& y) {
        if (e.kind == EventKind::Bouquet) thq[int(e.value)] = y[1];
        if (e.kind == EventKind::Minimal) e.info = "h = 0";
    };
    int seen = 0;
    FamilyTrace out =
        tracer.run(y0, evs, [&seen](EventKind k) { return k == EventKind::Bouquet && ++seen == 3; });
    if (tracer.stopped_) {
        out.start_triple = t;
        return out;
    }
    // theta(q) = theta0 + a q log q + b q through the three samples
    double M[3][4];
    for (int i = 0; i < 3; ++i) {
        M[i][0] = 1;
        M[i][1] = qs[i] * std::log(qs[i]);
        M[i][2] = qs[i];
        M[i][3] = thq[i];
    }
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(M[r][c]) > std::abs(M[p][c])) p = r;
        for (int j = 0; j < 4; ++j) std::swap(M[c][j], M[p][j]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = M[r][c] / M[c][c];
            for (int j = 0; j < 4; ++j) M[r][j] -= f * M[c][j];
        }
    }
    const double theta0 = M[0][3] / M[0][0];
    // keep only the last bouquet sample event, carrying the extrapolated limit
    std::vector<FlowEvent> kept;
    for (auto& e : out.events)
        if (e.kind != EventKind::Bouquet) kept.push_back(e);
    FlowEvent b = out.events.back();
    b.value = theta0;
    const double hb = -std::cos(2 * theta0);
    b.info = "theta0 " + std::to_string(theta0) + ", H " + std::to_string(mean_curvature_from_h(hb));
    kept.push_back(b);
    out.events = kept;
    out.start_triple = t;
    return out;
}

FlowState family_state_at(const Triple& t, double fraction, const FlowOptions& opts) {
    if (!(fraction > 0 && fraction < 1)) throw DomainError("family_state_at: fraction must lie in (0, 1)");
    const auto full = trace_family(t, opts);
    FlowOptions o = opts;
    o.stop_time = fraction * full.samples.back().t;
    return trace_family(t, o).samples.back();
}

FlowState state_at(const Triple& t, double time, const FlowOptions& opts) {
    const auto full = trace_any(t, opts);
    const double t_end = full.samples.back().t;
    if (!(time >= 0 && time <= t_end))
        throw DomainError("state_at: flow parameter outside [0, " + std::to_string(t_end) + "]");
    if (time == 0) return full.samples.front();
    if (time == t_end) return full.samples.back();
    FlowOptions o = opts;
    o.stop_time = time;
    return trace_any(t, o).samples.back();
}

FlowState rotational_state(std::int64_t l0, std::int64_t l2, double q, const FlowOptions& opts) {
    const Triple t{l0, 0, l2};
    if (!t.valid()) throw DomainError("rotational_state: need coprime 0 < l0 < l2");
    if (!(q > 0 && q <= 1)) throw DomainError("rotational_state: q must lie in (0, 1]");
    const double r = double(l0) / double(l2);
    // omega decreases from 1 to 0 on (0, pi/2)
    double lo = 0, hi = pi / 2;
    if (q == 1.0) {
        lo = hi = std::acos(r);
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (omega_circle(mid, q) > r ? lo : hi) = mid;
        }
    }
    const double th = 0.5 * (lo + hi);
    const double th0 = std::acos(r);
    Tracer tracer(rotational_rhs, opts, true, start_windings({th0, pi - th0, 0}));
    auto st = tracer.make_state(0, {q, th, pi - th});
    st.t = std::numeric_limits<double>::quiet_NaN();
    return st;
}

std::optional<FlowState> minimal_in_family(const Triple& t, const FlowOptions& opts) {
    const auto tr = trace_any(t, opts);
    if (const auto* e = tr.first(EventKind::Minimal)) return e->state;
    return std::nullopt;
}

FamilyTrace trace_any(const Triple& t, const FlowOptions& opts) {
    return t.rotational() ? trace_rotational(t.l0, t.l2, opts) : trace_family(t, opts);
}

} // namespace cmc
