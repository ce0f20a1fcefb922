#pragma once

#include "cmc/genus0.hpp"
#include "cmc/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmc {

struct FieldValue {
    double dq, dk, dh;
};

/// The torus flow in (q, k, h). At q = +-1 the removable singularity is
/// evaluated through the series of flow_coefficients. Throws DomainError at q = 0.
FieldValue vector_field(const ModuliPoint& p);

/// c = (1-k^2)(1-h^2) / ((1+q^2)/(2q) - kh)^2, conserved by the flow.
double level_constant(const ModuliPoint& p);

enum class FlowEnd { Start, End };

struct FlatEndpoint {
    ModuliPoint point;
    SymPoints sp;
};

/// Flat torus at either end of the family of a triple. sign = +1 gives the
/// q = 1 representative (the flow starts in {k - h < 0} and q decreases);
/// sign = -1 gives the mirror (q, k, h) -> (-q, k, -h) at q = -1.
/// The end point is the start assignment with the roles of l1 and l2 swapped,
/// applied to the partner triple (l1+l2-l0, l1, l2). The sym points are
/// continued angles as reached by the flow (theta2 < 0 at the end for sign +1).
FlatEndpoint flat_endpoint(const Triple& t, FlowEnd which, int sign = 1);

/// (H0, H1) in closed form; H0 at the start, H1 at the end.
std::pair<double, double> endpoint_H(const Triple& t);

struct FlowOptions {
    double rtol = 1e-11;
    double atol = 1e-12;
    double drift_tol = 1e-9; // per-step relative level drift before a step is rejected
    double first_step = 1e-3;
    double max_step = 0.25;
    double t_max = 200.0;
    int max_steps = 200000;
    double end_eps = 1e-10; // endpoint when q crosses 1 - end_eps after the turn
    double q_min = 1e-4;    // rotational cutoff for the bouquet limit
    bool periods = true;    // fill windings/xs (requires omega at every sample)
    double stop_time = -1;  // if positive, stop the trace exactly at this flow time
};

struct FlowState {
    double t = 0;
    ModuliPoint point;
    SymPoints sp; // continued angles
    double c = 0;
    double H = 0;
    /// p_jk for the branch of omega (rank-one corrected at cut crossings).
    IMat23 windings{};
    std::pair<double, double> xs{0, 0};
};

enum class EventKind { CutCrossing, Minimal, Bouquet, FlatEndpoint, Turn };
std::string to_string(EventKind k);

struct FlowEvent {
    EventKind kind;
    double t;
    FlowState state;
    std::string info;
    double value = 0; // event-specific scalar (sheet, extrapolated theta, ...)
};

struct FamilyTrace {
    Triple start_triple;
    std::optional<Triple> end_triple; // twizzled traces only
    bool rotational = false;
    double c = 0;
    double max_drift = 0; // max relative deviation of the level constant
    std::vector<FlowState> samples;
    std::vector<FlowEvent> events;

    int count(EventKind k) const;
    const FlowEvent* first(EventKind k) const;
};

/// Integrates the family of a twizzled triple (l1 >= 1) from its start flat
/// torus at q = 1 to the end flat torus. Throws DomainError for rotational or
/// invalid triples and NumericalError when the integration fails.
FamilyTrace trace_family(const Triple& t, const FlowOptions& opts = {});

/// Rotational family (l0, 0, l2): k = -1 throughout, integrated from q = 1 down
/// to q_min and extrapolated to the sphere bouquet.
FamilyTrace trace_rotational(std::int64_t l0, std::int64_t l2, const FlowOptions& opts = {});

struct BouquetLimit {
    double theta0;
    double H;
};

/// theta0 = pi/2 (1 - l0/l2), H = cot(pi l0/l2).
BouquetLimit bouquet_limit(std::int64_t l0, std::int64_t l2);

/// Closed-form criterion for a minimal torus in the family of t.
/// Twizzled: l1^2 + l2^2 >= 2 max(l0, l1+l2-l0)^2. Rotational: 1/2 < l0/l2 < 1/sqrt 2.
bool has_minimal(const Triple& t);

/// The h = 0 state of the family, if there is one.
std::optional<FlowState> minimal_in_family(const Triple& t, const FlowOptions& opts = {});

/// State of the twizzled family of t at the given fraction of its flow time.
FlowState family_state_at(const Triple& t, double fraction, const FlowOptions& opts = {});

/// State of either kind at flow time `time` in [0, t_end]; DomainError outside.
FlowState state_at(const Triple& t, double time, const FlowOptions& opts = {});

/// Rotational state (l0, 0, l2) at modulus q: theta1 solves omega(theta1, q) = l0/l2,
/// theta2 = pi - theta1. The flow time is not computed (NaN).
FlowState rotational_state(std::int64_t l0, std::int64_t l2, double q, const FlowOptions& opts = {});

/// Trace of either kind.
FamilyTrace trace_any(const Triple& t, const FlowOptions& opts = {});

} // namespace cmc
