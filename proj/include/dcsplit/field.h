#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcsplit/mesh.h"
#include "dcsplit/types.h"

namespace dcsplit {

/// Scalar function on a domain in R^n. The evaluator must be free of side
/// effects; it may be called concurrently.
class ScalarField {
 public:
  using Evaluator = std::function<double(const Vec&)>;

  ScalarField(int dimension, Evaluator evaluator, std::optional<double> lipschitz_hint = std::nullopt,
              std::string name = {});

  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const std::optional<double>& lipschitz_hint() const { return lipschitz_hint_; }

  /// Throws EvaluationFailure on dimension mismatch or non-finite output.
  double operator()(const Vec& x) const;

 private:
  int dimension_;
  Evaluator evaluator_;
  std::optional<double> lipschitz_hint_;
  std::string name_;
};

enum class DcStatus { kDc, kNotDc };

struct CatalogEntry {
  std::string name;
  std::string formula;
  int dimension;
  DcStatus status;
  nlohmann::json default_params;
};

/// Built-in fields, in listing order.
const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);

/// Instantiates a catalog field; `params` overrides the defaults.
ScalarField make_catalog_field(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// Default domain of a catalog field (unit box for n >= 2, [-1,1] for 1-D).
Domain catalog_domain(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// Tabulated field: the CSV holds n coordinate columns and one value column,
/// one row per vertex of triangulate(domain, level). Evaluation is piecewise
/// linear interpolation on that mesh. An optional header row is skipped.
ScalarField tabulated_field(const std::string& csv_path, const Domain& domain, int level);

}  // namespace dcsplit
