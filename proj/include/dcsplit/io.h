#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dcsplit/criterion.h"
#include "dcsplit/curves.h"
#include "dcsplit/dc_decompose.h"
#include "dcsplit/mesh.h"

namespace dcsplit {

nlohmann::json to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

/// {vertices: [[x,...]], simplices: [[i,...]], level}
nlohmann::json mesh_to_json(const SimplicialMesh& mesh);

/// {anchor, shift, normalization, affine_gradient, affine_offset, anchor_value,
///  wedges: [{facet, g_k, b_k, g_l, b_l}], probe_values: {points, f1, f2, fN}}
nlohmann::json dcpair_to_json(const DCPair& pair, const std::vector<Vec>& probes);

nlohmann::json convexity_to_json(const ConvexityReport& report);
nlohmann::json convergence_to_json(const ConvergenceReport& report);
nlohmann::json criterion_to_json(const CriterionReport& report);
nlohmann::json consistency_to_json(const ConsistencyRecord& record);

/// level,curve,V_phi,V_r,rho,O_R,sigma
std::string criterion_to_csv(const CriterionReport& report);

/// {kind, count, seed, angle_bound, segments}
nlohmann::json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const nlohmann::json& j);

/// Writes `text` to `path`, throwing ConfigError on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace dcsplit
