#include "cmc/serialize.hpp"
#include "cmc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace cmc {

namespace {

void write_number(std::string& out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

void write(std::string& out, const json& j, int indent, int level) {
    auto newline = [&](int lv) {
        if (indent < 0) return;
        out += '\n';
        out.append(std::size_t(indent * lv), ' ');
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(level + 1);
            out += json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            write(out, it.value(), indent, level + 1);
        }
        newline(level);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& e : j) flat = flat && !e.is_structured();
        out += '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += flat && indent >= 0 ? ", " : ",";
            first = false;
            if (!flat) newline(level + 1);
            write(out, e, indent, level + 1);
        }
        if (!flat) newline(level);
        out += ']';
        return;
    }
    case json::value_t::number_float:
        write_number(out, j.get<double>());
        return;
    default:
        out += j.dump();
    }
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json triple_json(const Triple& t) { return json::array({t.l0, t.l1, t.l2}); }

} // namespace

std::string dump17(const json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

json state_json(const FlowState& s) {
    json j;
    j["t"] = s.t;
    j["q"] = s.point.q;
    j["k"] = s.point.k;
    j["h"] = s.point.h;
    j["theta1"] = s.sp.theta1;
    j["theta2"] = s.sp.theta2;
    j["H"] = s.H;
    return j;
}

json trace_json(const FamilyTrace& tr) {
    json j;
    j["triple"] = tr.start_triple.str();
    j["rotational"] = tr.rotational;
    j["end_triple"] = tr.end_triple ? json(tr.end_triple->str()) : json(nullptr);
    j["c"] = tr.c;
    j["max_drift"] = tr.max_drift;
    json samples = json::array();
    for (const auto& s : tr.samples) samples.push_back(state_json(s));
    j["samples"] = samples;
    json events = json::array();
    for (const auto& e : tr.events) {
        json ev;
        ev["kind"] = to_string(e.kind);
        ev["t"] = e.t;
        ev["info"] = e.info;
        ev["value"] = e.value;
        ev["state"] = state_json(e.state);
        events.push_back(ev);
    }
    j["events"] = events;
    return j;
}

json mesh_json(const SurfaceMesh& m) {
    json meta;
    meta["q"] = m.q;
    meta["theta1"] = m.theta1;
    meta["theta2"] = m.theta2;
    meta["triple"] = m.triple;
    meta["nx"] = m.nx;
    meta["ny"] = m.ny;
    meta["g1"] = cplx_json(m.g1);
    meta["g2"] = cplx_json(m.g2);
    meta["pole"] = json::array({m.pole[0], m.pole[1], m.pole[2], m.pole[3]});
    meta["closure_defect"] = m.closure_defect;
    json j;
    j["meta"] = meta;
    json v = json::array();
    for (const auto& p : m.vertices) v.push_back(json::array({p[0], p[1], p[2], p[3]}));
    j["vertices4"] = v;
    json f = json::array();
    for (const auto& q : m.faces) f.push_back(json::array({q[0], q[1], q[2], q[3]}));
    j["faces"] = f;
    return j;
}

SurfaceMesh mesh_from_json(const json& j) {
    SurfaceMesh m;
    try {
        const auto& meta = j.at("meta");
        m.q = meta.at("q").get<double>();
        m.theta1 = meta.at("theta1").get<double>();
        m.theta2 = meta.at("theta2").get<double>();
        m.triple = meta.at("triple").get<std::string>();
        m.nx = meta.at("nx").get<int>();
        m.ny = meta.at("ny").get<int>();
        m.g1 = cplx_from(meta.at("g1"));
        m.g2 = cplx_from(meta.at("g2"));
        const auto& pole = meta.at("pole");
        for (int c = 0; c < 4; ++c) m.pole[c] = pole.at(c).get<double>();
        m.closure_defect = meta.at("closure_defect").get<double>();
        for (const auto& p : j.at("vertices4"))
            m.vertices.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>(),
                                  p.at(3).get<double>()});
        for (const auto& f : j.at("faces"))
            m.faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>(), f.at(3).get<int>()});
    } catch (const json::exception& e) {
        throw DomainError(std::string("mesh_from_json: ") + e.what());
    }
    if (m.vertices.size() != std::size_t(m.nx) * m.ny) throw DomainError("mesh_from_json: vertex count mismatch");
    for (const auto& f : m.faces)
        for (int i : f)
            if (i < 0 || std::size_t(i) >= m.vertices.size()) throw DomainError("mesh_from_json: face index out of range");
    for (const auto& p : m.vertices) m.projected.push_back(stereographic(p, m.pole));
    return m;
}

void write_obj(const SurfaceMesh& m, std::ostream& os) {
    char buf[128];
    os << "# cmc torus " << (m.triple.empty() ? "" : m.triple) << " q " << m.q << '\n';
    for (const auto& p : m.projected) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
        os << buf;
    }
    for (const auto& f : m.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
    if (!os) throw DomainError("write_obj: write failed");
}

json profile_json(const ProfileCurve& c) {
    json j;
    j["closed"] = c.closed;
    j["turning"] = c.turning;
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(json::array({p[0], p[1]}));
    j["points"] = pts;
    return j;
}

json classification_json(const ClassificationRecord& r) {
    json j;
    j["triple"] = r.triple.str();
    j["rotational"] = r.rotational;
    j["embedded"] = r.embedded;
    j["alexandrov"] = r.alexandrov;
    j["wrapping"] = r.wrapping;
    if (r.rotational) {
        j["lobes"] = r.lobes_major;
    } else {
        j["lobes"] = json::array({r.lobes_minor, r.lobes_major});
    }
    j["symmetry_cyclic_order"] = r.symmetry_order;
    j["minimal_in_family"] = r.minimal_in_family;
    j["H_range"] = json::array({r.H_range.first, r.H_range.second});
    j["partner"] = r.partner.str();
    return j;
}

json move_sequence_json(const MoveSequence& s) {
    json j;
    j["start"] = triple_json(s.start);
    json steps = json::array();
    for (const auto& st : s.steps) {
        json e;
        e["move"] = to_string(st.move);
        e["before"] = triple_json(st.before);
        e["after"] = triple_json(st.after);
        if (st.move == Move::Shift) e["k"] = st.shift;
        steps.push_back(e);
    }
    j["steps"] = steps;
    j["base"] = s.base == BaseKind::Rotational ? "rotational" : "product-lattice";
    return j;
}

json connectivity_json(const ConnectivityReport& r) {
    auto hnf = [](const SublatticeHNF& h) { return json::array({h.a, h.b, h.d}); };
    auto kind = [](SublatticeKind k) {
        switch (k) {
        case SublatticeKind::Plain: return "plain";
        case SublatticeKind::C: return "C";
        case SublatticeKind::D: return "D";
        case SublatticeKind::DC: return "DC";
        }
        return "?";
    };
    json j;
    j["maxIndex"] = r.max_index;
    j["ok"] = r.ok;
    json lat = json::array();
    for (const auto& p : r.paths) {
        json e;
        e["hnf"] = hnf(p.start);
        e["index"] = p.start.index();
        json path = json::array();
        for (const auto& s : p.steps) {
            json st;
            st["from"] = hnf(s.from);
            st["vertex"] = triple_json(s.vertex);
            st["lattice"] = kind(s.kind);
            st["moves"] = move_sequence_json(s.moves);
            st["to"] = hnf(s.to);
            path.push_back(st);
        }
        e["path"] = path;
        lat.push_back(e);
    }
    j["lattices"] = lat;
    j["maxPathLen"] = r.max_path_len;
    j["failures"] = r.failures;
    return j;
}

} // namespace cmc
