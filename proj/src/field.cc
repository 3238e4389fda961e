#include "dcsplit/field.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dcsplit/pl_function.h"

namespace dcsplit {

namespace {

using nlohmann::json;

json merged(const CatalogEntry& entry, const json& params) {
  json out = entry.default_params;
  if (params.is_object())
    for (auto it = params.begin(); it != params.end(); ++it) out[it.key()] = it.value();
  return out;
}

Vec vec_from(const json& j) {
  Vec v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

int dim_param(const json& p, int lo, int hi) {
  int dim = p.value("dim", lo);
  if (dim < lo || dim > hi)
    throw ConfigError("parameter dim=" + std::to_string(dim) + " out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return dim;
}

double segment_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  Eigen::Vector2d ab = b - a;
  double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

double osc(double x) {
  if (x == 0.0) return 0.0;
  return x * x * std::sin(1.0 / (x * x));
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t used = 0;
    double v = std::stod(cell, &used);
    row.push_back(v);
  }
  return row;
}

}  // namespace

ScalarField::ScalarField(int dimension, Evaluator evaluator, std::optional<double> lipschitz_hint, std::string name)
    : dimension_(dimension),
      evaluator_(std::move(evaluator)),
      lipschitz_hint_(lipschitz_hint),
      name_(std::move(name)) {}

double ScalarField::operator()(const Vec& x) const {
  if (x.size() != dimension_) throw EvaluationFailure("field '" + name_ + "' evaluated at a point of wrong dimension");
  double v = evaluator_(x);
  if (!std::isfinite(v)) throw EvaluationFailure("field '" + name_ + "' returned a non-finite value");
  return v;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"affine", "<g,x> + b", 2, DcStatus::kDc, {{"dim", 2}, {"gradient", {1.0, -0.5, 0.25}}, {"offset", 0.25}}},
      {"abs1d", "|x - c|", 1, DcStatus::kDc, {{"center", 0.0}}},
      {"neg_abs1d", "-|x - c|", 1, DcStatus::kDc, {{"center", 0.0}}},
      {"quadratic", "sum x_i^2", 2, DcStatus::kDc, {{"dim", 2}}},
      {"saddle", "x^2 - y^2", 2, DcStatus::kDc, json::object()},
      {"gaussian_bump",
       "exp(-|x - c|^2 / s^2)",
       2,
       DcStatus::kDc,
       {{"center", {0.5, 0.5}}, {"width", 0.3}}},
      {"osc1d", "x^2 sin(1/x^2), 0 at x = 0", 1, DcStatus::kNotDc, {{"dim", 1}}},
      {"dist_to_polygon",
       "distance to the boundary of a polygon",
       2,
       DcStatus::kDc,
       {{"vertices", {{0.2, 0.2}, {0.8, 0.3}, {0.4, 0.8}}}}},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw ConfigError("unknown catalog field '" + name + "' (see `dcsplit catalog`)");
}

ScalarField make_catalog_field(const std::string& name, const json& params) {
  const CatalogEntry& entry = catalog_entry(name);
  const json p = merged(entry, params);

  if (name == "affine") {
    int dim = dim_param(p, 1, 3);
    Vec all = vec_from(p.at("gradient"));
    if (all.size() < dim) throw ConfigError("affine: gradient needs at least dim entries");
    Vec g = all.head(dim);
    double b = p.at("offset").get<double>();
    return ScalarField(dim, [g, b](const Vec& x) { return g.dot(x) + b; }, g.norm(), name);
  }
  if (name == "abs1d" || name == "neg_abs1d") {
    double c = p.at("center").get<double>();
    double sign = name == "abs1d" ? 1.0 : -1.0;
    return ScalarField(1, [c, sign](const Vec& x) { return sign * std::abs(x[0] - c); }, 1.0, name);
  }
  if (name == "quadratic") {
    int dim = dim_param(p, 1, 3);
    return ScalarField(dim, [](const Vec& x) { return x.squaredNorm(); }, 2.0 * std::sqrt(double(dim)), name);
  }
  if (name == "saddle") {
    return ScalarField(2, [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; }, 2.0 * std::sqrt(2.0), name);
  }
  if (name == "gaussian_bump") {
    Vec c = vec_from(p.at("center"));
    double w = p.at("width").get<double>();
    if (!(w > 0.0)) throw ConfigError("gaussian_bump: width must be positive");
    double lip = std::sqrt(2.0 / M_E) / w;
    return ScalarField(static_cast<int>(c.size()),
                       [c, w](const Vec& x) { return std::exp(-(x - c).squaredNorm() / (w * w)); }, lip, name);
  }
  if (name == "osc1d") {
    int dim = dim_param(p, 1, 2);
    return ScalarField(dim, [](const Vec& x) { return osc(x[0]); }, std::nullopt, name);
  }
  if (name == "dist_to_polygon") {
    const json& vj = p.at("vertices");
    if (vj.size() < 3) throw ConfigError("dist_to_polygon: need at least 3 vertices");
    std::vector<Eigen::Vector2d> poly;
    for (const auto& v : vj) poly.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return ScalarField(
        2,
        [poly](const Vec& x) {
          Eigen::Vector2d q(x[0], x[1]);
          double d = std::numeric_limits<double>::infinity();
          for (size_t i = 0; i < poly.size(); ++i) d = std::min(d, segment_distance(q, poly[i], poly[(i + 1) % poly.size()]));
          return d;
        },
        1.0, name);
  }
  throw ConfigError("catalog field '" + name + "' has no constructor");
}

Domain catalog_domain(const std::string& name, const json& params) {
  const CatalogEntry& entry = catalog_entry(name);
  const json p = merged(entry, params);
  int dim = p.contains("dim") ? p["dim"].get<int>() : entry.dimension;
  if (name == "gaussian_bump") dim = static_cast<int>(p.at("center").size());
  if (dim == 1 || name == "osc1d") return box_domain(Vec::Constant(dim, -1.0), Vec::Constant(dim, 1.0));
  return box_domain(Vec::Zero(dim), Vec::Ones(dim));
}

ScalarField tabulated_field(const std::string& csv_path, const Domain& domain, int level) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open tabulated field '" + csv_path + "'");
  const int n = domain.dimension;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      auto row = parse_row(line);
      if (static_cast<int>(row.size()) != n + 1)
        throw ConfigError("tabulated field row has " + std::to_string(row.size()) + " columns, expected " +
                          std::to_string(n + 1));
      rows.push_back(std::move(row));
    } catch (const std::invalid_argument&) {
      if (!first) throw ConfigError("tabulated field: non-numeric row '" + line + "'");
    }
    first = false;
  }

  auto mesh = std::make_shared<const SimplicialMesh>(triangulate(domain, level));
  const double tol = 1e-9 * std::max(1.0, domain.diameter());
  Vec values(mesh->vertex_count());
  for (Index v = 0; v < mesh->vertex_count(); ++v) {
    const Vec p = mesh->vertex(v);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const std::vector<double>& r) {
      for (int a = 0; a < n; ++a)
        if (std::abs(r[static_cast<size_t>(a)] - p[a]) > tol) return false;
      return true;
    });
    if (it == rows.end()) {
      std::ostringstream msg;
      msg << "tabulated field has no sample at mesh vertex (" << p.transpose() << ") of level " << level;
      throw ConfigError(msg.str());
    }
    values[v] = (*it)[static_cast<size_t>(n)];
  }
  auto plf = std::make_shared<const PLFunction>(mesh, std::move(values));
  return ScalarField(n, [plf](const Vec& x) { return plf->value(x); }, lipschitz_estimate(*plf), csv_path);
}

}  // namespace dcsplit
