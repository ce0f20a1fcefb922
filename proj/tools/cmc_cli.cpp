// cmc: flows, meshes, profile curves, classification and the moduli graph of
// equivariant CMC tori in the 3-sphere.
#include "verify.hpp"

#include "cmc/errors.hpp"
#include "cmc/flow.hpp"
#include "cmc/genus0.hpp"
#include "cmc/moduli.hpp"
#include "cmc/profile.hpp"
#include "cmc/serialize.hpp"
#include "cmc/surface.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace cmc;

struct Resolution {
    int nx = 0, ny = 0;
};

Resolution parse_res(const std::string& s) {
    Resolution r;
    char x = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d%c%d%c", &r.nx, &x, &r.ny, &tail) != 3 || (x != 'x' && x != 'X'))
        throw DomainError("resolution must look like NXxNY, got '" + s + "'");
    if (r.nx < 8 || r.ny < 8 || r.nx > 4096 || r.ny > 4096)
        throw DomainError("resolution must lie between 8 and 4096 per side");
    return r;
}

struct Config {
    std::string triple;
    int indent = 2;
    int threads = 0;
    std::string out = "-";
    // flow
    bool rotational = false;
    double rtol = FlowOptions{}.rtol;
    double atol = FlowOptions{}.atol;
    double q_min = FlowOptions{}.q_min;
    // mesh / profile
    std::optional<double> t;
    std::optional<double> q;
    double fraction = 0.35;
    std::string res = "128x128";
    std::string format = "auto";
    int which = 1;
    int points = 4096;
    // classify / graph / verify
    std::optional<std::int64_t> wrapping;
    std::int64_t max_index = 8;
    std::string suite = "all";
};

FlowOptions flow_options(const Config& c) {
    FlowOptions o;
    o.rtol = c.rtol;
    o.atol = c.atol;
    o.q_min = c.q_min;
    return o;
}

// Writes text to the output path, or stdout for "-".
void emit(const Config& c, const std::string& text) {
    if (c.out == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream os(c.out, std::ios::binary);
    if (!os) throw DomainError("cannot open output file " + c.out);
    os << text << '\n';
    if (!os) throw DomainError("write failed for " + c.out);
}

// State of the family selected by --q (rotational), --t (flow time) or --fraction.
FlowState select_state(const Triple& t, const Config& c) {
    const FlowOptions o = flow_options(c);
    if (c.q) {
        if (!t.rotational()) throw DomainError("--q applies to rotational triples only");
        if (c.t) throw DomainError("give either --q or --t, not both");
        return rotational_state(t.l0, t.l2, *c.q, o);
    }
    if (c.t) return state_at(t, *c.t, o);
    if (!(c.fraction > 0 && c.fraction < 1)) throw DomainError("--fraction must lie in (0, 1)");
    const auto full = trace_any(t, o);
    return state_at(t, c.fraction * full.samples.back().t, o);
}

bool at_flat_end(const FlowState& s) { return s.point.q >= 1 - 1e-9; }

int cmd_flow(const Config& c) {
    const Triple t = Triple::parse(c.triple);
    if (c.rotational && !t.rotational()) throw DomainError("--rotational needs l1 = 0, got " + t.str());
    if (!c.rotational && t.rotational()) throw DomainError("rotational triple " + t.str() + ": pass --rotational");
    const FlowOptions o = flow_options(c);
    const FamilyTrace tr = c.rotational ? trace_rotational(t.l0, t.l2, o) : trace_family(t, o);
    emit(c, dump17(trace_json(tr), c.indent));
    return 0;
}

int cmd_mesh(const Config& c) {
    const Triple t = Triple::parse(c.triple);
    const Resolution r = parse_res(c.res);
    MeshOptions mo;
    mo.nx = r.nx;
    mo.ny = r.ny;
    mo.threads = c.threads;
    const FlowState st = select_state(t, c);
    SurfaceMesh m;
    if (at_flat_end(st)) {
        m = build_flat_mesh(st.t == 0 || t.rotational() ? t : t.partner(), mo);
    } else {
        m = build_mesh(st, mo);
        m.triple = t.str();
    }
    std::string format = c.format;
    if (format == "auto") {
        const bool json_ext = c.out.size() >= 5 && c.out.compare(c.out.size() - 5, 5, ".json") == 0;
        format = json_ext ? "json" : "obj";
    }
    if (format == "json") {
        emit(c, dump17(mesh_json(m), c.indent));
    } else {
        if (c.out == "-") {
            write_obj(m, std::cout);
        } else {
            std::ofstream os(c.out, std::ios::binary);
            if (!os) throw DomainError("cannot open output file " + c.out);
            write_obj(m, os);
        }
    }
    return 0;
}

int cmd_profile(const Config& c) {
    const Triple t = Triple::parse(c.triple);
    const FlowState st = select_state(t, c);
    json j;
    j["triple"] = t.str();
    j["state"] = state_json(st);
    json curves = json::array();
    int total = 0;
    if (t.rotational()) {
        if (c.points < 8) throw DomainError("--points must be at least 8");
        const auto curve = rotational_profile_curve(st.point.q, st.sp.theta1, int(t.l2), c.points);
        curves.push_back(profile_json(curve));
        total = curve.turning;
    } else {
        if (at_flat_end(st)) throw DomainError("profile curves of twizzled tori need a genus-one state, not a flat end");
        const Resolution r = parse_res(c.res);
        MeshOptions mo;
        mo.nx = r.nx;
        mo.ny = r.ny;
        mo.threads = c.threads;
        const auto found = extract_profiles(build_mesh(st, mo), c.which);
        for (const auto& p : found) curves.push_back(profile_json(p));
        total = total_turning(found);
    }
    j["curves"] = curves;
    j["turning"] = total;
    emit(c, dump17(j, c.indent));
    return 0;
}

int cmd_classify(const Config& c) {
    const Triple t = Triple::parse(c.triple);
    json j = classification_json(classify(t, c.wrapping));
    j["reduction"] = move_sequence_json(reduce_to_base(t));
    emit(c, dump17(j, c.indent));
    return 0;
}

int cmd_graph(const Config& c) {
    if (c.max_index < 1) throw DomainError("--max-index must be at least 1");
    const auto rep = connectivity_check(c.max_index);
    emit(c, dump17(connectivity_json(rep), c.indent));
    return rep.ok ? 0 : 2;
}

int cmd_verify(const Config& c) {
    int failed = 0;
    verify::run(c.suite, [&](const verify::CriterionResult& r) {
        std::cout << verify::format(r) << '\n' << std::flush;
        failed += !r.pass;
    });
    return failed == 0 ? 0 : 2;
}

int run(int argc, char** argv) {
    Config c;
    CLI::App app{"Equivariant CMC tori in the 3-sphere: flows, meshes, profiles, classification"};
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "key = value file; subcommand keys as [mesh] sections or mesh.res = ...");
    // triples are comma separated, so config arrays use ';'
    app.get_config_formatter_base()->arrayDelimiter(';');
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--indent", c.indent, "JSON indentation, -1 for compact")->check(CLI::Range(-1, 8));
    app.add_option("--threads", c.threads, "mesh threads, 0 uses CMC_THREADS or all cores")->check(CLI::NonNegativeNumber);

    auto add_triple = [&](CLI::App* s) {
        s->add_option("--triple", c.triple, "integer triple L0,L1,L2")->required();
    };
    auto add_out = [&](CLI::App* s) { s->add_option("--out", c.out, "output path, - for stdout"); };
    auto add_flow = [&](CLI::App* s) {
        s->add_option("--rtol", c.rtol, "integrator relative tolerance")->check(CLI::PositiveNumber);
        s->add_option("--atol", c.atol, "integrator absolute tolerance")->check(CLI::PositiveNumber);
        s->add_option("--q-min", c.q_min, "rotational cutoff towards the bouquet")->check(CLI::Range(1e-8, 0.5));
    };
    auto add_state = [&](CLI::App* s) {
        s->add_option("--t", c.t, "flow time along the family (default: --fraction of the trace)");
        s->add_option("--fraction", c.fraction, "position along the family when --t is absent");
        s->add_option("--q", c.q, "rotational only: the genus-one parameter q in (0, 1]");
    };

    auto* flow = app.add_subcommand("flow", "trace the family of a triple (FamilyTrace JSON)");
    add_triple(flow);
    flow->add_flag("--rotational", c.rotational, "rotational family (l1 = 0)");
    add_flow(flow);
    add_out(flow);

    auto* mesh = app.add_subcommand("mesh", "surface mesh as OBJ (stereographic) or JSON (unit quaternions)");
    add_triple(mesh);
    add_state(mesh);
    add_flow(mesh);
    mesh->add_option("--res", c.res, "grid NXxNY");
    mesh->add_option("--format", c.format, "obj, json, or auto from the output extension")
        ->check(CLI::IsMember({"auto", "obj", "json"}));
    add_out(mesh);

    auto* profile = app.add_subcommand("profile", "profile curves and their turning number (JSON)");
    add_triple(profile);
    add_state(profile);
    add_flow(profile);
    profile->add_option("--res", c.res, "twizzled only: mesh grid NXxNY for contour extraction");
    profile->add_option("--which", c.which, "twizzled only: axis 1 or 2")->check(CLI::IsMember({1, 2}));
    profile->add_option("--points", c.points, "rotational only: curve samples");
    add_out(profile);

    auto* cls = app.add_subcommand("classify", "classification record of a triple (JSON)");
    add_triple(cls);
    cls->add_option("--wrapping", c.wrapping, "wrapping number of the profile components (default l0/gcd(l0,l1))")
        ->check(CLI::PositiveNumber);
    add_out(cls);

    auto* graph = app.add_subcommand("graph", "connectivity of the moduli graph up to a sublattice index (JSON)");
    graph->add_option("--max-index", c.max_index, "largest sublattice index")->check(CLI::Range(1, 64));
    add_out(graph);

    auto* ver = app.add_subcommand("verify", "run the acceptance suites, one line per criterion");
    std::string suites = "all";
    for (const auto& s : verify::suite_names()) suites += ", " + s;
    ver->add_option("--suite", c.suite, "one of: " + suites);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*flow) return cmd_flow(c);
    if (*mesh) return cmd_mesh(c);
    if (*profile) return cmd_profile(c);
    if (*cls) return cmd_classify(c);
    if (*graph) return cmd_graph(c);
    return cmd_verify(c);
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
