#include "cmc/moduli.hpp"
#include "cmc/errors.hpp"
#include "cmc/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cmc {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

void require_valid(const Triple& t, const char* what) {
    if (!t.valid()) throw DomainError(std::string(what) + ": invalid triple " + t.str());
}

} // namespace

std::string to_string(Move m) {
    switch (m) {
    case Move::One: return "1";
    case Move::Two: return "2";
    case Move::Three: return "3";
    case Move::Shift: return "shift";
    }
    return "?";
}

Triple apply_move(const Triple& t, Move m) {
    require_valid(t, "apply_move");
    Triple out;
    switch (m) {
    case Move::One:
        out = t.partner();
        break;
    case Move::Two:
        if (!(t.l1 > 0 && t.l2 < 2 * t.l0)) throw DomainError("move 2 needs 0 < l1 and l2 < 2 l0, got " + t.str());
        out = {t.l0, t.l2 - t.l0, t.l0 + t.l1};
        break;
    case Move::Three:
        if (t.l1 % 2 == 0) throw DomainError("move 3 needs odd l1, got " + t.str());
        out = {2 * t.l0, t.l1, 2 * t.l2};
        break;
    case Move::Shift:
        throw DomainError("apply_move: use shift_l2 for shifts");
    }
    if (!out.valid()) throw NumericalError("apply_move: move left the triple range: " + out.str());
    return out;
}

Triple shift_l2(const Triple& t, std::int64_t k) {
    require_valid(t, "shift_l2");
    const Triple out{t.l0, t.l1, t.l2 + k * t.l0};
    if (!(out.l0 < out.l2)) throw DomainError("shift_l2: result violates l0 < l2");
    return out;
}

MoveSequence reduce_to_base(const Triple& start) {
    require_valid(start, "reduce_to_base");
    MoveSequence seq;
    seq.start = start;
    Triple t = start;
    auto push = [&](Move m) {
        const Triple n = apply_move(t, m);
        seq.steps.push_back({m, t, n, 0});
        t = n;
    };
    auto shift_down = [&] {
        // smallest l2 > l0 in the residue class of l2 mod l0
        const std::int64_t target = t.l0 + mod(t.l2 - t.l0 - 1, t.l0) + 1;
        if (target != t.l2) {
            const std::int64_t k = (target - t.l2) / t.l0;
            const Triple n = shift_l2(t, k);
            seq.steps.push_back({Move::Shift, t, n, k});
            t = n;
        }
    };
    while (t.l1 != 0) {
        const std::int64_t l1_before = t.l1;
        // make l2 <= 2 l0 and 2 l0 <= l1 + l2 (move 1 lowers l0 otherwise)
        for (;;) {
            shift_down();
            if (t.l2 == 2 * t.l0) {
                seq.base = BaseKind::ProductLattice;
                return seq;
            }
            if (2 * t.l0 <= t.l1 + t.l2) break;
            push(Move::One);
        }
        if (2 * t.l0 < t.l1 + t.l2) {
            push(Move::Two);
            push(Move::One);
            push(Move::Two);
        } else if (t.l1 % 2 == 1) {
            push(Move::Three);
            push(Move::One);
        } else {
            push(Move::Two);
            push(Move::Three);
            push(Move::One);
        }
        if (t.l1 != 0 && t.l2 == 2 * t.l0) {
            seq.base = BaseKind::ProductLattice;
            return seq;
        }
        if (!(t.l1 < l1_before)) throw NumericalError("reduce_to_base: l1 did not decrease at " + t.str());
    }
    seq.base = BaseKind::Rotational;
    return seq;
}

bool SublatticeHNF::contains(std::int64_t n1, std::int64_t n2) const {
    if (n2 % d != 0) return false;
    return (n1 - (n2 / d) * b) % a == 0;
}

std::string SublatticeHNF::str() const {
    std::ostringstream os;
    os << '[' << a << ',' << b << ',' << d << ']';
    return os.str();
}

SublatticeHNF hnf_from_generators(std::pair<std::int64_t, std::int64_t> u, std::pair<std::int64_t, std::int64_t> v) {
    // Euclid on the second coordinates
    while (v.second != 0) {
        const std::int64_t f = u.second / v.second;
        u = {u.first - f * v.first, u.second - f * v.second};
        std::swap(u, v);
    }
    // now v = (a', 0), u = (b', d')
    if (v.first == 0 || u.second == 0) throw DomainError("hnf_from_generators: dependent generators");
    SublatticeHNF h;
    h.a = std::abs(v.first);
    h.d = std::abs(u.second);
    const std::int64_t b = u.second < 0 ? -u.first : u.first;
    h.b = mod(b, h.a);
    return h;
}

SublatticeHNF triple_lattice(const Triple& t, SublatticeKind kind) {
    require_valid(t, "triple_lattice");
    SublatticeHNF h;
    h.a = 1;
    while (!in_triple_sublattice(t, kind, h.a, 0)) ++h.a;
    for (h.d = 1;; ++h.d) {
        bool found = false;
        for (std::int64_t n1 = 0; n1 < h.a; ++n1)
            if (in_triple_sublattice(t, kind, n1, h.d)) {
                h.b = n1;
                found = true;
                break;
            }
        if (found) break;
    }
    if (h.index() != triple_sublattice_index(t, kind))
        throw NumericalError("triple_lattice: index mismatch for " + t.str());
    return h;
}

std::int64_t sigma(std::int64_t n) {
    std::int64_t s = 0;
    for (std::int64_t k = 1; k <= n; ++k)
        if (n % k == 0) s += k;
    return s;
}

std::vector<SublatticeHNF> enumerate_sublattices(std::int64_t max_index) {
    if (max_index < 1) throw DomainError("enumerate_sublattices: max_index must be >= 1");
    std::vector<SublatticeHNF> out;
    for (std::int64_t n = 1; n <= max_index; ++n)
        for (std::int64_t a = 1; a <= n; ++a) {
            if (n % a != 0) continue;
            for (std::int64_t b = 0; b < a; ++b) out.push_back({a, b, n / a});
        }
    return out;
}

bool contained_in(const SublatticeHNF& s, const Triple& t, SublatticeKind kind) {
    return in_triple_sublattice(t, kind, s.a, 0) && in_triple_sublattice(t, kind, s.b, s.d);
}

VertexTriple find_vertex_triple(const SublatticeHNF& s) {
    if (s.index() == 1) throw DomainError("find_vertex_triple: the full lattice needs no vertex");
    VertexTriple v;
    if (s.d > 1) {
        // n2 mod d kills s: rotational vertex (d, 0, d+1)
        v = {{s.d, 0, s.d + 1}, SublatticeKind::Plain};
    } else if (s.b == 0) {
        v = {{s.a, 0, s.a + 1}, SublatticeKind::D};
    } else {
        // cyclic quotient: gamma1 = g1*, p = a, q = b, g(l gamma1 + m gamma2) = l - q m
        const std::int64_t p = s.a;
        v = {{p, 1, p + mod(-s.b - p - 1, p) + 1}, SublatticeKind::Plain};
    }
    if (!v.triple.valid() || !contained_in(s, v.triple, v.kind))
        throw NumericalError("find_vertex_triple: construction failed for " + s.str());
    return v;
}

ConnectivityReport connectivity_check(std::int64_t max_index) {
    ConnectivityReport rep;
    rep.max_index = max_index;
    for (const auto& start : enumerate_sublattices(max_index)) {
        ConnectivityPath path;
        path.start = start;
        SublatticeHNF cur = start;
        std::string fail;
        while (cur.index() > 1 && fail.empty()) {
            ConnectivityStep st;
            st.from = cur;
            const auto vt = find_vertex_triple(cur);
            st.vertex = vt.triple;
            st.kind = vt.kind;
            if (st.vertex.rotational()) {
                // rotational pairing (l2-1, 0, l2) -> (1, 0, l2) with the embedded edge
                st.moves.start = st.vertex;
                st.moves.steps.push_back({Move::One, st.vertex, apply_move(st.vertex, Move::One), 0});
                st.moves.base = BaseKind::Rotational;
            } else {
                st.moves = reduce_to_base(st.vertex);
            }
            if (!contained_in(cur, st.vertex, st.kind)) {
                fail = cur.str() + " not contained in the lattice of " + st.vertex.str();
                break;
            }
            // replay the moves
            Triple t = st.moves.start;
            for (const auto& mv : st.moves.steps) {
                const Triple n = mv.move == Move::Shift ? shift_l2(mv.before, mv.shift) : apply_move(mv.before, mv.move);
                if (!(mv.before == t) || !(n == mv.after)) fail = "move replay failed at " + mv.before.str();
                t = n;
            }
            // coordinates of cur in the basis of the vertex lattice
            const SublatticeHNF L = triple_lattice(st.vertex, st.kind);
            auto in_basis = [&](std::int64_t n1, std::int64_t n2) {
                const std::int64_t y = n2 / L.d;
                return std::pair{(n1 - y * L.b) / L.a, y};
            };
            st.to = hnf_from_generators(in_basis(cur.a, 0), in_basis(cur.b, cur.d));
            if (!(st.to.index() * st.vertex.l0 == cur.index() && st.to.index() < cur.index()))
                fail = "index did not drop at " + cur.str();
            cur = st.to;
            path.steps.push_back(std::move(st));
        }
        if (!fail.empty()) {
            rep.ok = false;
            rep.failures.push_back(fail);
        }
        rep.max_path_len = std::max(rep.max_path_len, path.steps.size());
        rep.paths.push_back(std::move(path));
    }
    return rep;
}

std::int64_t rotational_wrapping(const Triple& t) {
    require_valid(t, "rotational_wrapping");
    return t.l0 / std::gcd(t.l0, t.l1);
}

ClassificationRecord classify(const Triple& t, std::optional<std::int64_t> wrapping) {
    require_valid(t, "classify");
    ClassificationRecord r;
    r.triple = t;
    r.rotational = t.rotational();
    r.embedded = r.rotational && t.l0 == 1;
    r.wrapping = wrapping ? *wrapping : rotational_wrapping(t);
    if (r.wrapping < 1) throw DomainError("classify: wrapping must be positive");
    r.alexandrov = r.rotational && r.wrapping == 1;
    r.lobes_minor = t.l1;
    r.lobes_major = t.l2;
    r.symmetry_order = std::gcd(t.l1, t.l2);
    r.minimal_in_family = has_minimal(t);
    const auto [h0, h1] = endpoint_H(t);
    r.H_range = {std::min(h0, h1), std::max(h0, h1)};
    r.partner = t.partner();
    return r;
}

} // namespace cmc
