#include "dcsplit/io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dcsplit {

using nlohmann::json;

json to_json(const Vec& v) {
  json j = json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Vec vec_from_json(const json& j) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) throw ConfigError("expected a coordinate array, got " + j.dump());
  Vec v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

json mesh_to_json(const SimplicialMesh& mesh) {
  json verts = json::array();
  for (Index v = 0; v < mesh.vertex_count(); ++v) verts.push_back(to_json(mesh.vertex(v)));
  json simps = json::array();
  for (Index s = 0; s < mesh.simplex_count(); ++s) {
    json row = json::array();
    for (Index i = 0; i < mesh.simplices().rows(); ++i) row.push_back(mesh.simplices()(i, s));
    simps.push_back(row);
  }
  return {{"level", mesh.level()}, {"vertices", verts}, {"simplices", simps}};
}

json dcpair_to_json(const DCPair& pair, const std::vector<Vec>& probes) {
  const ConvexSum& f1 = pair.convex_sum();
  json wedges = json::array();
  for (const WedgeFunction& w : f1.wedges())
    wedges.push_back({{"facet", w.facet},
                      {"g_k", to_json(w.gradient_k)},
                      {"b_k", w.offset_k},
                      {"g_l", to_json(w.gradient_l)},
                      {"b_l", w.offset_l}});
  json pts = json::array(), v1 = json::array(), v2 = json::array(), vn = json::array();
  for (const Vec& p : probes) {
    pts.push_back(to_json(p));
    v1.push_back(pair.f1(p));
    v2.push_back(pair.f2(p));
    vn.push_back(pair.fN(p));
  }
  return {{"anchor", to_json(pair.anchor())},
          {"anchor_value", pair.anchor_value()},
          {"shift", f1.shift()},
          {"normalization", f1.normalization() == AffineNormalization::kBalanced ? "balanced" : "anchor_constant"},
          {"affine_gradient", to_json(f1.affine_gradient())},
          {"affine_offset", f1.affine_offset()},
          {"wedges", wedges},
          {"probe_values", {{"points", pts}, {"f1", v1}, {"f2", v2}, {"fN", vn}}}};
}

json convexity_to_json(const ConvexityReport& report) {
  json j = {{"samples", report.samples}, {"max_violation", report.max_violation}};
  if (report.witness_x.size() > 0) j["witness"] = {to_json(report.witness_x), to_json(report.witness_y)};
  return j;
}

json convergence_to_json(const ConvergenceReport& report) {
  return {{"levels", report.levels},
          {"sup_deltas", report.sup_deltas},
          {"sup_norms", report.sup_norms},
          {"convex_hinges", report.convex_hinges},
          {"field_range", report.field_range},
          {"reconstruction_residual", report.reconstruction_residual},
          {"probe_count", report.probes.size()},
          {"verdict", to_string(report.verdict)}};
}

json criterion_to_json(const CriterionReport& report) {
  json records = json::array();
  for (const CurveRecord& r : report.records)
    records.push_back({{"level", r.level},
                       {"curve", r.curve},
                       {"V_phi", r.derivative_variation},
                       {"V_r", r.tangent_variation},
                       {"rho", r.ratio},
                       {"O_R", r.turn},
                       {"sigma", r.turn_ratio},
                       {"max_abs_derivative", r.max_abs_derivative},
                       {"breakpoints", r.breakpoints}});
  json levels = json::array();
  for (const LevelAggregate& a : report.levels)
    levels.push_back({{"level", a.level},
                      {"max_rho", a.max_ratio},
                      {"max_sigma", a.max_turn_ratio},
                      {"lipschitz", a.lipschitz},
                      {"c3", a.constants.c3},
                      {"c4", a.constants.c4}});
  return {{"statistic", report.statistic == Statistic::kVariation ? "variation" : "turn"},
          {"verdict", to_string(report.verdict)},
          {"thresholds",
           {{"stabilization", report.options.stabilization},
            {"growth", report.options.growth},
            {"growth_steps", report.options.growth_steps}}},
          {"levels", levels},
          {"records", records},
          {"note", "empirical maxima over a generated curve family; not the true constant"}};
}

json consistency_to_json(const ConsistencyRecord& record) {
  json v = json::array();
  for (const auto& s : record.violations)
    v.push_back({{"level", s.level}, {"curve", s.curve}, {"lower_excess", s.lower_excess}, {"upper_excess", s.upper_excess}});
  return {{"verdicts_match", record.verdicts_match},
          {"checked", record.checked},
          {"violations", v},
          {"consistent", record.consistent()}};
}

std::string criterion_to_csv(const CriterionReport& report) {
  std::ostringstream out;
  out << "level,curve,V_phi,V_r,rho,O_R,sigma\n";
  char buf[256];
  for (const CurveRecord& r : report.records) {
    std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.level, static_cast<long long>(r.curve),
                  r.derivative_variation, r.tangent_variation, r.ratio, r.turn, r.turn_ratio);
    out << buf;
  }
  return out.str();
}

json family_to_json(const FamilySpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"count", spec.count},
          {"seed", spec.seed},
          {"angle_bound", spec.angle_bound},
          {"segments", spec.segments}};
}

FamilySpec family_from_json(const json& j) {
  FamilySpec spec;
  if (j.contains("kind")) spec.kind = family_kind_from_string(j["kind"].get<std::string>());
  spec.count = j.value("count", spec.count);
  spec.seed = j.value("seed", spec.seed);
  spec.angle_bound = j.value("angle_bound", spec.angle_bound);
  spec.segments = j.value("segments", spec.segments);
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace dcsplit
