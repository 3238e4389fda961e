#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcsplit/criterion.h"
#include "dcsplit/curves.h"
#include "dcsplit/dc_decompose.h"
#include "dcsplit/field.h"
#include "dcsplit/mesh.h"

namespace dcsplit {

struct FieldSpec {
  /// Catalog name; empty when `csv` is set.
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  /// Tabulated samples on the vertices of triangulate(domain, csv_level).
  std::string csv;
  int csv_level = 0;

  static FieldSpec named(std::string name, nlohmann::json params = nlohmann::json::object()) {
    FieldSpec f;
    f.name = std::move(name);
    f.params = std::move(params);
    return f;
  }
};

struct DomainSpec {
  std::vector<Vec> points;
  std::optional<Vec> anchor;
};

struct RunConfig {
  FieldSpec field = FieldSpec::named("saddle");
  /// Catalog default when absent.
  std::optional<DomainSpec> domain;
  int level_min = 1;
  int level_max = 4;
  /// Level used by `decompose`; defaults to level_max.
  std::optional<int> level;
  FamilySpec family;
  Index probe_count = 256;
  Index samples = 10000;
  std::uint64_t seed = 1;
  std::string out = "out";
  /// json, csv or both.
  std::string format = "both";
  std::string normalization = "balanced";
  CriterionOptions thresholds;
  double convergence_fraction = 1e-2;
  double hinge_tol = kHingeTol;
  double convexity_tol = 1e-9;

  bool operator==(const RunConfig& other) const;
};

nlohmann::json config_to_json(const RunConfig& config);
/// Missing keys keep their defaults. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Throws ConfigError naming the offending key and the accepted range.
void validate(const RunConfig& config);

Domain make_domain(const RunConfig& config);
ScalarField make_field(const RunConfig& config, const Domain& domain);
DecomposeOptions decompose_options(const RunConfig& config);

/// FNV-1a of the canonical JSON dump without `out`, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace dcsplit
