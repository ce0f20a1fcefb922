#include "verify.hpp"

#include "cmc/elliptic.hpp"
#include "cmc/errors.hpp"
#include "cmc/flow.hpp"
#include "cmc/genus0.hpp"
#include "cmc/moduli.hpp"
#include "cmc/profile.hpp"
#include "cmc/quadrature.hpp"
#include "cmc/spectral.hpp"
#include "cmc/surface.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

namespace cmc::verify {

namespace {

using std::numbers::pi;

// Collects failed conditions and the worst observed value of named quantities.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        if (!ok) ++nfail_;
    }
    // records |value| and fails when it exceeds tol
    void bound(double value, double tol, const std::string& what) {
        const double a = std::abs(value);
        auto it = std::find_if(worst_.begin(), worst_.end(), [&](const auto& w) { return w.first == what; });
        if (it == worst_.end()) {
            worst_.push_back({what, a});
        } else if (!(a <= it->second)) {
            it->second = a;
        }
        check(a <= tol, what + " = " + num(value));
    }
    bool ok() const { return nfail_ == 0; }
    std::string detail(const std::string& extra = "") const {
        std::ostringstream os;
        for (std::size_t i = 0; i < worst_.size(); ++i) os << (i ? ", " : "") << worst_[i].first << " " << num(worst_[i].second);
        if (!extra.empty()) os << (worst_.empty() ? "" : ", ") << extra;
        if (nfail_ > 0) {
            os << "; " << nfail_ << " failed:";
            for (const auto& f : failures_) os << " [" << f << "]";
        }
        return os.str();
    }
    static std::string num(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return buf;
    }

private:
    std::vector<std::pair<std::string, double>> worst_;
    std::vector<std::string> failures_;
    int nfail_ = 0;
};

std::vector<Triple> twizzled_up_to(std::int64_t max_l2) {
    std::vector<Triple> out;
    for (std::int64_t l2 = 2; l2 <= max_l2; ++l2)
        for (std::int64_t l0 = 1; l0 < l2; ++l0)
            for (std::int64_t l1 = 1; l1 < l0; ++l1)
                if (Triple{l0, l1, l2}.valid()) out.push_back({l0, l1, l2});
    return out;
}

double norm4(const Vec4& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); }

void elliptic_suite(Tally& t) {
    for (int i = 1; i <= 19; ++i) {
        const double q = 0.05 * i;
        const auto ke = elliptic_KE(q);
        const auto c = elliptic_KE_comp(q);
        t.bound(ke.ee * c.kk + c.ee * ke.kk - ke.kk * c.kk - pi / 2, 1e-12, "legendre");
    }
    for (double d : {-0.05, -0.03, -0.01, -0.002, 0.0, 0.002, 0.01, 0.03, 0.05}) {
        const auto c = elliptic_KE_comp_ext(1.0 + d);
        const double ks = pi * (0.5 - d / 4 + 5 * d * d / 32 - 7 * d * d * d / 64);
        const double es = pi * (0.5 + d / 4 + d * d / 32 - d * d * d / 64);
        const double tol = 10 * std::pow(d, 4) + 1e-15;
        t.check(std::abs(c.kk - ks) <= tol, "K' series at d = " + Tally::num(d));
        t.check(std::abs(c.ee - es) <= tol, "E' series at d = " + Tally::num(d));
    }
    for (int i = 1; i <= 200; ++i) {
        const double q = -1.0 + 2.0 * i / 201.0;
        const auto c = elliptic_KE_comp(q);
        const double alpha = 2 * c.ee / (1 + q * q), beta = c.ee / std::abs(q);
        t.check(1.0 <= alpha && alpha < c.kk && c.kk < beta, "chain at q = " + Tally::num(q));
    }
}

void dn_suite(Tally& t) {
    for (double q : {0.05, 0.3, 0.6, 0.9, 0.999}) {
        const double kp = elliptic_KE_comp(q).kk;
        for (int i = 0; i <= 40; ++i) {
            const double y = 0.15 * i;
            const auto d = jacobi_dn(y, q);
            t.bound(d.dv * d.dv + (d.v * d.v - 1) * (d.v * d.v - q * q), 1e-8, "ode");
            t.bound(jacobi_dn(y + 2 * kp, q).v - d.v, 1e-10, "period");
        }
    }
    for (double y : {0.0, 0.5, 1.0, 2.0, 4.0, 6.0}) {
        t.bound(jacobi_dn(y, 1 - 1e-8).v - 1.0, 1e-6, "q->1");
        t.bound(jacobi_dn(y, 1e-8).v - 1.0 / std::cosh(y), 1e-6, "q->0");
    }
}

void omega_suite(Tally& t) {
    for (double q : {0.01, 0.2, 0.5, 0.8, 0.99}) {
        const double inc = quad([&](double th) { return omega_density(th, q); }, 0.0, pi, 1e-13);
        t.bound(std::abs(inc) - 2.0, 1e-8, "increment");
        t.bound(omega_circle(pi / 2, q, 1) - omega_circle(pi / 2, q) - 2.0, 1e-8, "sheet jump");
        for (double th : {0.05, 0.4, 0.8, 1.1, 1.5}) t.bound(omega_circle(th, q) + omega_circle(pi - th, q), 1e-8, "skew");
    }
    for (double th : {0.1, 0.5, 1.0, 1.5, 2.0, 2.6, 3.0}) t.bound(omega_circle(th, 1e-6) - (1 - 2 * th / pi), 1e-4, "q->0");
}

void flow_suite(Tally& t) {
    const auto tr = trace_family({2, 1, 3});
    t.bound(tr.max_drift, 1e-8, "drift");
    t.check(tr.count(EventKind::Turn) == 1, "one sign change of dq");
    bool mono = true;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) mono = mono && tr.samples[i].H < tr.samples[i - 1].H;
    t.check(mono, "H monotonic");
    t.bound(std::abs(tr.samples.front().H) - 1 / std::sqrt(15.0), 1e-6, "|H| start");
    t.bound(std::abs(tr.samples.back().H) - 1 / std::sqrt(15.0), 1e-6, "|H| end");
    t.check(tr.end_triple && *tr.end_triple == Triple{2, 1, 3}, "end triple (2,1,3)");
    t.check(tr.count(EventKind::Minimal) == 1, "one minimal event");
    if (const auto* m = tr.first(EventKind::Minimal)) t.bound(m->state.H, 1e-8, "H at minimal");
}

void involution_suite(Tally& t) {
    int n = 0;
    for (const auto& tp : twizzled_up_to(7)) {
        ++n;
        const auto tr = trace_family(tp);
        t.check(tr.end_triple && *tr.end_triple == tp.partner(), tp.str() + " ends at " + tp.partner().str());
        t.bound(tr.max_drift, 1e-8, "drift");
        const double ratio = double(tp.l1) / double(tp.l2);
        double worst = 0;
        for (const auto& st : tr.samples) {
            const double n1 = nu_circle(st.sp.theta1, st.point.q), n2 = nu_circle(st.sp.theta2, st.point.q);
            worst = std::max(worst, std::abs((n1 - n2) / (n1 + n2) - ratio));
        }
        t.bound(worst, 1e-7, "l1/l2");
    }
    t.check(n > 0, "nonempty sweep");
}

void rotational_suite(Tally& t) {
    const auto r12 = trace_rotational(1, 2);
    const auto r13 = trace_rotational(1, 3);
    const auto* b2 = r12.first(EventKind::Bouquet);
    const auto* b3 = r13.first(EventKind::Bouquet);
    t.check(b2 && b3, "bouquet events");
    if (!b2 || !b3) return;
    // the bouquet end of the range is open; its H is -cot(2 theta0) at the extrapolated limit
    const double lim12 = -1 / std::tan(2 * b2->value), lim13 = -1 / std::tan(2 * b3->value);
    t.bound(r12.samples.front().H - 1 / std::sqrt(3.0), 1e-4, "(1,2) H flat");
    t.bound(lim12 - 0.0, 1e-4, "(1,2) H bouquet");
    t.bound(r13.samples.front().H - endpoint_H({1, 0, 3}).first, 1e-4, "(1,3) H flat");
    t.bound(lim13 - 1 / std::tan(pi / 3), 1e-4, "(1,3) H bouquet");
    t.bound(b2->value - pi / 2 * (1 - 1.0 / 2), 1e-4, "(1,2) theta1 limit");
    t.bound(b3->value - pi / 2 * (1 - 1.0 / 3), 1e-4, "(1,3) theta1 limit");
    for (const auto& [tr, lo] : {std::pair{&r12, lim12}, std::pair{&r13, lim13}}) {
        const double hi = tr->samples.front().H;
        bool inside = true;
        for (const auto& st : tr->samples) inside = inside && st.H > lo - 1e-12 && st.H <= hi + 1e-12;
        t.check(inside, tr->start_triple.str() + " H inside its range");
    }
    for (const auto* tr : {&r12, &r13}) {
        bool mono = true;
        for (std::size_t i = 1; i < tr->samples.size(); ++i) mono = mono && tr->samples[i].H < tr->samples[i - 1].H;
        t.check(mono, "H monotonic");
    }
}

void check_forms(Tally& t, const FormResiduals& r, bool genus_one, const std::string& tag) {
    t.bound(r.unit_norm, 1e-10, tag + " norm");
    t.bound(r.closure, 1e-6, tag + " closure");
    t.bound(r.conformality / std::max(1.0, r.scale), 1e-6, tag + " conformality");
    t.bound(r.mean_curvature, 1e-3, tag + " H");
    t.bound(r.monodromy, 1e-6, tag + " monodromy");
    if (genus_one) t.bound(r.frame, 1e-6, tag + " frame");
}

void check_mesh(Tally& t, const SurfaceMesh& m, const std::string& tag) {
    t.check(m.vertices.size() == 256u * 256u, tag + " vertex count");
    double worst = 0;
    for (const auto& v : m.vertices) worst = std::max(worst, std::abs(norm4(v) - 1));
    t.bound(worst, 1e-10, tag + " mesh norm");
    t.bound(m.closure_defect, 1e-6, tag + " mesh closure");
}

void mesh_suite(Tally& t) {
    MeshOptions o;
    o.nx = o.ny = 256;
    {
        const cplx r1 = unit_sqrt(cplx(0, 1)), r2 = unit_sqrt(cplx(0, -1));
        const auto [g1, g2] = periods_from_windings(cplx(0, 1), cplx(0, -1), 1, 1, 1, -1);
        check_forms(t, flat_form_residuals(r1, r2, g1, g2), false, "clifford");
        check_mesh(t, build_flat_mesh(r1, r2, g1, g2, o), "clifford");
    }
    {
        const auto st = rotational_state(1, 2, 0.8);
        const SymPoints sp{st.sp.theta1, st.sp.theta2, 0};
        const auto mp = periods_for_mesh(0.8, sp, s_from_windings(st.windings));
        check_forms(t, fundamental_form_residuals(0.8, sp, mp), true, "(1,0,2)");
        check_mesh(t, build_mesh(st, o), "(1,0,2)");
    }
    {
        // the midpoint of a self-partnered family sits on the cut, so use 0.35
        const auto st = family_state_at({2, 1, 3}, 0.35);
        const SymPoints sp{reduce_angle(st.sp.theta1).first, reduce_angle(st.sp.theta2).first, 0};
        const auto mp = periods_for_mesh(st.point.q, sp, s_from_windings(st.windings));
        check_forms(t, fundamental_form_residuals(st.point.q, sp, mp), true, "(2,1,3)");
        check_mesh(t, build_mesh(st, o), "(2,1,3)");
    }
}

std::string profile_suite(Tally& t) {
    for (std::int64_t l2 = 2; l2 <= 5; ++l2) {
        const Triple tp{1, 0, l2};
        for (double q : {0.9, 0.5, 0.1}) {
            const auto c = rotational_profile_curve(1, l2, q, 4096);
            t.check(c.turning == 1, tp.str() + " turning " + std::to_string(c.turning));
            const auto st = rotational_state(1, l2, q);
            const double kp = elliptic_KE_comp(q).kk;
            double kmin = 1e300;
            for (int i = 0; i < 64; ++i)
                kmin = std::min(kmin, profile_rotational(2 * kp * i / 64.0, q, st.sp.theta1).kappa);
            t.check(kmin > 0, tp.str() + " curvature positive");
        }
    }
    for (const Triple tp : {Triple{2, 0, 3}, Triple{2, 0, 5}, Triple{3, 0, 4}}) {
        for (double q : {0.9, 0.4}) {
            const auto c = rotational_profile_curve(tp.l0, tp.l2, q, 4096);
            t.check(c.turning == tp.l0, tp.str() + " turning " + std::to_string(c.turning));
        }
    }
    MeshOptions o;
    o.nx = o.ny = 160;
    const auto m = build_mesh(family_state_at({2, 1, 5}, 0.35), o);
    const auto curves = extract_profiles(m, 1);
    const int total = total_turning(curves);
    t.check(total == 2 || total == 4, "(2,1,5) total turning " + std::to_string(total));
    return "(2,1,5) components " + std::to_string(curves.size()) + ", total turning " + std::to_string(total);
}

std::string moduli_suite(Tally& t) {
    const auto rep = connectivity_check(8);
    t.check(rep.ok, "connectivity_check(8)");
    t.check(rep.paths.size() == 1 + 3 + 4 + 7 + 6 + 12 + 8 + 15, "all sublattices of index <= 8");
    for (const auto& p : rep.paths) {
        std::int64_t idx = p.start.index();
        for (const auto& s : p.steps) {
            t.check(s.to.index() < idx, "index decreases from " + s.from.str());
            idx = s.to.index();
        }
        t.check(idx == 1, "path of " + p.start.str() + " reaches the full lattice");
    }
    long involution = 0, shifts = 0;
    for (std::int64_t l2 = 2; l2 <= 30; ++l2)
        for (std::int64_t l0 = 1; l0 < l2; ++l0)
            for (std::int64_t l1 = 0; l1 < l0; ++l1) {
                const Triple tp{l0, l1, l2};
                if (!tp.valid()) continue;
                if (l1 > 0) {
                    const Triple p = apply_move(tp, Move::One);
                    t.check(apply_move(p, Move::One) == tp, "move 1 involution at " + tp.str());
                    t.check((p == tp) == (2 * l0 == l1 + l2), "move 1 fixed points at " + tp.str());
                    ++involution;
                }
                for (std::int64_t k = -(l2 / l0); k <= 3; ++k) {
                    if (!(l2 + k * l0 > l0)) continue;
                    const Triple s = shift_l2(tp, k);
                    for (auto kind : {SublatticeKind::Plain, SublatticeKind::C, SublatticeKind::D, SublatticeKind::DC})
                        for (std::int64_t n1 = -6; n1 <= 6; ++n1)
                            for (std::int64_t n2 = -6; n2 <= 6; ++n2)
                                t.check(in_triple_sublattice(tp, kind, n1, n2) == in_triple_sublattice(s, kind, n1, n2),
                                        "shift preserves lattice at " + tp.str());
                    ++shifts;
                }
            }
    return "lattices " + std::to_string(rep.paths.size()) + ", max path " + std::to_string(rep.max_path_len) +
           ", involutions " + std::to_string(involution) + ", shifts " + std::to_string(shifts);
}

std::string classification_suite(Tally& t) {
    int rot = 0, tw = 0, with_min = 0;
    for (std::int64_t l2 = 2; l2 <= 10; ++l2) {
        const auto tr = trace_rotational(1, l2);
        t.check(tr.count(EventKind::Minimal) == 0, "(1,0," + std::to_string(l2) + ") has a minimal torus");
        ++rot;
    }
    for (const auto& tp : twizzled_up_to(10)) {
        const auto tr = trace_family(tp);
        const bool traced = tr.count(EventKind::Minimal) > 0;
        const double m = double(std::max(tp.l0, tp.partner().l0));
        const double l1 = double(tp.l1), l2 = double(tp.l2);
        const bool predicted = l1 * l1 + l2 * l2 >= 2 * m * m;
        t.check(traced == predicted, tp.str() + " minimal " + (traced ? "found" : "absent"));
        with_min += traced;
        ++tw;
    }
    return "rotational " + std::to_string(rot) + ", twizzled " + std::to_string(tw) + ", with minimal " +
           std::to_string(with_min);
}

struct Suite {
    const char* name;
    std::function<std::string(Tally&)> fn;
};

const std::vector<Suite>& suites() {
    static const std::vector<Suite> s = {
        {"elliptic", [](Tally& t) { elliptic_suite(t); return std::string(); }},
        {"dn", [](Tally& t) { dn_suite(t); return std::string(); }},
        {"omega", [](Tally& t) { omega_suite(t); return std::string(); }},
        {"flow", [](Tally& t) { flow_suite(t); return std::string(); }},
        {"involution", [](Tally& t) { involution_suite(t); return std::string(); }},
        {"rotational", [](Tally& t) { rotational_suite(t); return std::string(); }},
        {"mesh", [](Tally& t) { mesh_suite(t); return std::string(); }},
        {"profile", profile_suite},
        {"moduli", moduli_suite},
        {"classification", classification_suite},
    };
    return s;
}

// wall-clock budget per criterion, seconds
constexpr double budget[10] = {1, 1, 1, 5, 120, 30, 30, 30, 30, 300};

CriterionResult run_one(int index) {
    const auto& s = suites()[std::size_t(index)];
    CriterionResult r;
    r.id = index + 1;
    r.name = s.name;
    Tally t;
    const auto t0 = std::chrono::steady_clock::now();
    std::string extra;
    try {
        extra = s.fn(t);
    } catch (const std::exception& e) {
        t.check(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    t.check(r.seconds <= budget[index], "time budget " + Tally::num(budget[index]) + " s exceeded");
    r.pass = t.ok();
    r.detail = t.detail(extra);
    return r;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : suites()) n.push_back(s.name);
        return n;
    }();
    return names;
}

std::vector<CriterionResult> run(const std::string& suite, const std::function<void(const CriterionResult&)>& on_result) {
    const auto& names = suite_names();
    std::vector<int> which;
    if (suite == "all") {
        for (std::size_t i = 0; i < names.size(); ++i) which.push_back(int(i));
    } else {
        const auto it = std::find(names.begin(), names.end(), suite);
        if (it == names.end()) throw DomainError("unknown verify suite '" + suite + "'");
        which.push_back(int(it - names.begin()));
    }
    std::vector<CriterionResult> out;
    for (int i : which) {
        out.push_back(run_one(i));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "%s [%d] %s (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    return std::string(head) + (r.detail.empty() ? "" : ": " + r.detail);
}

} // namespace cmc::verify
