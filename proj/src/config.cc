#include "dcsplit/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "dcsplit/io.h"

namespace dcsplit {

using nlohmann::json;

namespace {

[[noreturn]] void reject(const std::string& key, const std::string& requirement, const json& got) {
  throw ConfigError("config: " + key + " must be " + requirement + " (got " + got.dump() + ")");
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    reject(key, "of the documented type", j.at(key));
  }
}

}  // namespace

bool RunConfig::operator==(const RunConfig& other) const {
  return config_to_json(*this) == config_to_json(other);
}

json config_to_json(const RunConfig& c) {
  json field = {{"name", c.field.name}, {"params", c.field.params}};
  if (!c.field.csv.empty()) field = {{"csv", c.field.csv}, {"level", c.field.csv_level}};
  json j = {{"field", field},
            {"levels", {{"min", c.level_min}, {"max", c.level_max}}},
            {"family", family_to_json(c.family)},
            {"probe_count", c.probe_count},
            {"samples", c.samples},
            {"seed", c.seed},
            {"out", c.out},
            {"format", c.format},
            {"normalization", c.normalization},
            {"thresholds",
             {{"stabilization", c.thresholds.stabilization},
              {"growth", c.thresholds.growth},
              {"growth_steps", c.thresholds.growth_steps},
              {"convergence_fraction", c.convergence_fraction}}},
            {"tolerances", {{"hinge", c.hinge_tol}, {"convexity", c.convexity_tol}}}};
  if (c.level) j["level"] = *c.level;
  if (c.domain) {
    json pts = json::array();
    for (const Vec& p : c.domain->points) pts.push_back(to_json(p));
    j["domain"] = {{"points", pts}};
    if (c.domain->anchor) j["domain"]["anchor"] = to_json(*c.domain->anchor);
  }
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  if (j.contains("field")) {
    const json& f = j["field"];
    if (f.is_string()) {
      c.field = FieldSpec::named(f.get<std::string>());
    } else if (f.contains("csv")) {
      c.field = FieldSpec{};
      c.field.csv = f["csv"].get<std::string>();
      c.field.csv_level = f.value("level", 0);
    } else {
      c.field = FieldSpec::named(f.value("name", std::string{}));
      if (f.contains("params")) c.field.params = f["params"];
    }
  }
  if (j.contains("domain")) {
    const json& d = j["domain"];
    DomainSpec spec;
    if (d.contains("box")) {
      const Vec lo = vec_from_json(d["box"].at(0)), hi = vec_from_json(d["box"].at(1));
      if (lo.size() != hi.size()) reject("domain.box", "two corners of equal dimension", d["box"]);
      for (int corner = 0; corner < (1 << lo.size()); ++corner) {
        Vec p(lo.size());
        for (Index a = 0; a < lo.size(); ++a) p[a] = (corner >> a) & 1 ? hi[a] : lo[a];
        spec.points.push_back(p);
      }
    } else if (d.contains("points")) {
      for (const auto& p : d["points"]) spec.points.push_back(vec_from_json(p));
    } else {
      reject("domain", "an object with 'box' or 'points'", d);
    }
    if (d.contains("anchor")) spec.anchor = vec_from_json(d["anchor"]);
    c.domain = std::move(spec);
  }
  if (j.contains("levels")) {
    read(j["levels"], "min", c.level_min);
    read(j["levels"], "max", c.level_max);
  }
  if (j.contains("level")) c.level = j["level"].get<int>();
  if (j.contains("family")) c.family = family_from_json(j["family"]);
  read(j, "probe_count", c.probe_count);
  read(j, "samples", c.samples);
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  read(j, "format", c.format);
  read(j, "normalization", c.normalization);
  if (j.contains("thresholds")) {
    const json& t = j["thresholds"];
    read(t, "stabilization", c.thresholds.stabilization);
    read(t, "growth", c.thresholds.growth);
    read(t, "growth_steps", c.thresholds.growth_steps);
    read(t, "convergence_fraction", c.convergence_fraction);
  }
  if (j.contains("tolerances")) {
    read(j["tolerances"], "hinge", c.hinge_tol);
    read(j["tolerances"], "convexity", c.convexity_tol);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const RunConfig& c) {
  if (c.field.csv.empty()) catalog_entry(c.field.name);
  if (!c.field.csv.empty() && c.field.csv_level < 0) reject("field.level", ">= 0", c.field.csv_level);
  if (c.level_min < 0 || c.level_min > 12) reject("levels.min", "in [0, 12]", c.level_min);
  if (c.level_max < c.level_min || c.level_max > 12) reject("levels.max", "in [levels.min, 12]", c.level_max);
  if (c.level && (*c.level < 0 || *c.level > 12)) reject("level", "in [0, 12]", *c.level);
  if (c.family.count < 1) reject("family.count", ">= 1", c.family.count);
  if (c.family.segments < 3) reject("family.segments", ">= 3", c.family.segments);
  if (!(c.family.angle_bound > 0.0 && c.family.angle_bound < std::numbers::pi / 2))
    reject("family.angle_bound", "in (0, pi/2) radians", c.family.angle_bound);
  if (c.probe_count < 1) reject("probe_count", ">= 1", c.probe_count);
  if (c.samples < 1) reject("samples", ">= 1", c.samples);
  if (c.format != "json" && c.format != "csv" && c.format != "both") reject("format", "json, csv or both", c.format);
  if (c.normalization != "balanced" && c.normalization != "anchor_constant")
    reject("normalization", "balanced or anchor_constant", c.normalization);
  if (!(c.thresholds.stabilization > 0.0 && c.thresholds.stabilization < 1.0))
    reject("thresholds.stabilization", "in (0, 1)", c.thresholds.stabilization);
  if (!(c.thresholds.growth > 1.0)) reject("thresholds.growth", "> 1", c.thresholds.growth);
  if (c.thresholds.growth_steps < 1) reject("thresholds.growth_steps", ">= 1", c.thresholds.growth_steps);
  if (!(c.convergence_fraction > 0.0)) reject("thresholds.convergence_fraction", "> 0", c.convergence_fraction);
  if (!(c.hinge_tol > 0.0)) reject("tolerances.hinge", "> 0", c.hinge_tol);
  if (!(c.convexity_tol > 0.0)) reject("tolerances.convexity", "> 0", c.convexity_tol);
}

Domain make_domain(const RunConfig& c) {
  if (c.domain) return build_domain(c.domain->points, c.domain->anchor);
  if (!c.field.csv.empty()) throw ConfigError("a tabulated field needs an explicit domain");
  return catalog_domain(c.field.name, c.field.params);
}

ScalarField make_field(const RunConfig& c, const Domain& domain) {
  ScalarField f = c.field.csv.empty() ? make_catalog_field(c.field.name, c.field.params)
                                      : tabulated_field(c.field.csv, domain, c.field.csv_level);
  if (f.dimension() != domain.dimension)
    throw ConfigError("field dimension " + std::to_string(f.dimension()) + " does not match domain dimension " +
                      std::to_string(domain.dimension));
  return f;
}

DecomposeOptions decompose_options(const RunConfig& c) {
  DecomposeOptions o;
  o.normalization =
      c.normalization == "balanced" ? AffineNormalization::kBalanced : AffineNormalization::kAnchorConstant;
  o.hinge_tol = c.hinge_tol;
  return o;
}

std::string config_hash(const RunConfig& c) {
  json j = config_to_json(c);
  j.erase("out");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dcsplit
