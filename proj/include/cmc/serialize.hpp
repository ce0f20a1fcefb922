#pragma once

#include "cmc/flow.hpp"
#include "cmc/moduli.hpp"
#include "cmc/profile.hpp"
#include "cmc/surface.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace cmc {

using json = nlohmann::ordered_json;

/// Compact or indented text with every floating-point number written with
/// 17 significant digits; non-finite numbers become null.
std::string dump17(const json& j, int indent = -1);

json state_json(const FlowState& s);
json trace_json(const FamilyTrace& tr);

/// {meta:{q,theta1,theta2,triple,nx,ny,g1,g2,pole,closure_defect}, vertices4, faces}
json mesh_json(const SurfaceMesh& m);
/// Inverse of mesh_json; projections are recomputed from the stored pole.
SurfaceMesh mesh_from_json(const json& j);

/// ASCII OBJ of the projected vertices with quad faces (1-based).
void write_obj(const SurfaceMesh& m, std::ostream& os);

json profile_json(const ProfileCurve& c);
json classification_json(const ClassificationRecord& r);
json move_sequence_json(const MoveSequence& s);
/// {maxIndex, ok, lattices:[{hnf, path:[...]}], maxPathLen, failures}
json connectivity_json(const ConnectivityReport& r);

} // namespace cmc
