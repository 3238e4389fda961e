#include "dcsplit/commands.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dcsplit/io.h"
#include "dcsplit/parallel.h"

#ifndef DCSPLIT_VERSION
#define DCSPLIT_VERSION "0.0.0"
#endif

namespace dcsplit {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

class RunContext {
 public:
  RunContext(const RunConfig& config, std::string command) : config_(config), command_(std::move(command)) {
    validate(config_);
    std::error_code ec;
    std::filesystem::create_directories(config_.out, ec);
    if (ec) throw ConfigError("cannot create output directory '" + config_.out + "': " + ec.message());
    start_ = Clock::now();
  }

  bool wants_json() const { return config_.format != "csv"; }
  bool wants_csv() const { return config_.format != "json"; }

  void write(const std::string& name, const std::string& text) {
    write_text((std::filesystem::path(config_.out) / name).string(), text);
    outputs_.push_back(name);
  }
  void write(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void mark(const std::string& phase) {
    const auto now = Clock::now();
    timings_[phase] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

  void finish(int exit_code) {
    timings_["total"] = std::chrono::duration<double>(Clock::now() - start_).count();
    json manifest = {{"command", command_},
                     {"version", DCSPLIT_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"config_hash", config_hash(config_)},
                     {"config", config_to_json(config_)},
                     {"threads", thread_budget()},
                     {"outputs", outputs_},
                     {"exit_code", exit_code},
                     {"timings_seconds", timings_}};
    write_text((std::filesystem::path(config_.out) / "manifest.json").string(), manifest.dump(2) + "\n");
  }

 private:
  const RunConfig& config_;
  std::string command_;
  Clock::time_point start_;
  Clock::time_point last_ = Clock::now();
  std::vector<std::string> outputs_;
  json timings_ = json::object();
};

std::string row(const std::vector<double>& values) {
  std::string line;
  char buf[32];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!line.empty()) line += ',';
    line += buf;
  }
  return line + "\n";
}

std::string field_label(const RunConfig& c) { return c.field.csv.empty() ? c.field.name : c.field.csv; }

}  // namespace

int cmd_decompose(const RunConfig& config, std::ostream& log) {
  RunContext ctx(config, "decompose");
  const Domain domain = make_domain(config);
  const ScalarField field = make_field(config, domain);
  const int level = config.level.value_or(config.level_max);

  auto mesh = std::make_shared<const SimplicialMesh>(triangulate(domain, level));
  const PLFunction plf = interpolate(field, mesh);
  const DCPair pair = decompose(plf, domain.anchor, decompose_options(config));
  ctx.mark("decompose");

  const double residual = reconstruction_residual(pair, domain, config.samples, config.seed);
  const ConvexityReport c1 =
      convexity_check([&](const Vec& x) { return pair.f1(x); }, domain, config.samples, config.seed);
  const ConvexityReport c2 =
      convexity_check([&](const Vec& x) { return pair.f2(x); }, domain, config.samples, config.seed + 1);
  ctx.mark("checks");

  const auto counts = pair.hinge_counts();
  const bool passed = residual <= 1e-9 && c1.passed(config.convexity_tol) && c2.passed(config.convexity_tol);
  json summary = {{"field", field_label(config)},
                  {"level", level},
                  {"simplices", mesh->simplex_count()},
                  {"hinges", {{"convex", counts[0]}, {"concave", counts[1]}, {"flat", counts[2]}}},
                  {"reconstruction_residual", residual},
                  {"convexity", {{"f1", convexity_to_json(c1)}, {"f2", convexity_to_json(c2)}}},
                  {"passed", passed}};

  const std::vector<Vec> probes = probe_points(domain, config.probe_count);
  if (ctx.wants_json()) ctx.write("decompose.json", json{{"summary", summary}, {"pair", dcpair_to_json(pair, probes)}});
  if (ctx.wants_csv()) {
    std::string csv;
    for (int a = 0; a < domain.dimension; ++a) csv += "x" + std::to_string(a) + ",";
    csv += "f1,f2,fN\n";
    for (const Vec& p : probes) {
      std::vector<double> values(p.data(), p.data() + p.size());
      values.insert(values.end(), {pair.f1(p), pair.f2(p), pair.fN(p)});
      csv += row(values);
    }
    ctx.write("decompose_probes.csv", csv);
  }
  ctx.write("summary.json", summary);
  ctx.mark("write");

  log << "decompose " << field_label(config) << " level " << level << ": hinges convex=" << counts[0]
      << " concave=" << counts[1] << " flat=" << counts[2] << ", residual=" << residual
      << ", f1 convexity=" << (c1.passed(config.convexity_tol) ? "pass" : "FAIL")
      << ", f2 convexity=" << (c2.passed(config.convexity_tol) ? "pass" : "FAIL") << "\n";
  ctx.finish(0);
  return 0;
}

int cmd_criterion(const RunConfig& config, std::ostream& log) {
  RunContext ctx(config, "criterion");
  const Domain domain = make_domain(config);
  const ScalarField field = make_field(config, domain);
  const std::vector<Curve> family = generate_family(domain, config.family);
  ctx.mark("family");

  std::vector<int> levels;
  for (int k = config.level_min; k <= config.level_max; ++k) levels.push_back(k);
  const auto [variation, turn_report] = criterion_reports(field, domain, family, levels, config.thresholds);
  const ConsistencyRecord consistency = verdict_consistency(variation, turn_report);
  ctx.mark("criterion");

  if (ctx.wants_json())
    ctx.write("criterion.json", json{{"field", field_label(config)},
                                     {"curves", family.size()},
                                     {"variation", criterion_to_json(variation)},
                                     {"turn", criterion_to_json(turn_report)},
                                     {"consistency", consistency_to_json(consistency)}});
  if (ctx.wants_csv()) ctx.write("criterion.csv", criterion_to_csv(variation));
  ctx.mark("write");

  log << "criterion " << field_label(config) << ": variation " << to_string(variation.verdict) << ", turn "
      << to_string(turn_report.verdict) << ", sandwich violations " << consistency.violations.size() << "/"
      << consistency.checked << "\n";
  for (const auto& agg : variation.levels)
    log << "  level " << agg.level << ": max rho " << agg.max_ratio << ", max sigma " << agg.max_turn_ratio << "\n";

  const int code = variation.verdict == Verdict::kBounded ? 0 : variation.verdict == Verdict::kDiverging ? 2 : 3;
  ctx.finish(code);
  return code;
}

int cmd_converge(const RunConfig& config, std::ostream& log) {
  RunContext ctx(config, "converge");
  const Domain domain = make_domain(config);
  const ScalarField field = make_field(config, domain);

  ConvergeOptions opts;
  opts.decompose = decompose_options(config);
  opts.convergence_fraction = config.convergence_fraction;
  opts.growth = config.thresholds.growth;
  opts.growth_steps = config.thresholds.growth_steps;
  opts.residual_samples = config.samples;
  opts.seed = config.seed;
  const ConvergenceReport report =
      converge(field, domain, config.level_min, config.level_max, config.probe_count, opts);
  ctx.mark("converge");

  json j = convergence_to_json(report);
  j["field"] = field_label(config);
  if (ctx.wants_json()) ctx.write("converge.json", j);
  if (ctx.wants_csv()) {
    std::string csv = "level,sup_norm,sup_delta,convex_hinges\n";
    for (size_t i = 0; i < report.levels.size(); ++i) {
      const double delta = i == 0 ? 0.0 : report.sup_deltas[i - 1];
      csv += std::to_string(report.levels[i]) + "," +
             row({report.sup_norms[i], delta, static_cast<double>(report.convex_hinges[i])});
    }
    ctx.write("converge.csv", csv);
  }
  ctx.mark("write");

  log << "converge " << field_label(config) << ": " << to_string(report.verdict) << "\n";
  for (size_t i = 0; i < report.levels.size(); ++i) {
    log << "  level " << report.levels[i] << ": sup|f1| " << report.sup_norms[i];
    if (i > 0) log << ", delta " << report.sup_deltas[i - 1];
    log << "\n";
  }
  const int code = report.verdict == Verdict::kConverging ? 0 : report.verdict == Verdict::kDiverging ? 2 : 3;
  ctx.finish(code);
  return code;
}

int cmd_catalog(std::ostream& out) {
  for (const CatalogEntry& e : catalog()) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-16s %dD  %-6s  %-40s %s\n", e.name.c_str(), e.dimension,
                  e.status == DcStatus::kDc ? "DC" : "not-DC", e.formula.c_str(), e.default_params.dump().c_str());
    out << buf;
  }
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Difference-of-convex decomposition of Lipschitz fields and DC criterion statistics", "dcsplit"};
  app.set_version_flag("--version", DCSPLIT_VERSION);
  app.require_subcommand(1);

  struct Flags {
    std::string config, field, out, format;
    int level_min = 0, level_max = 0, level = 0;
    std::uint64_t seed = 0;
    double angle_bound = 0.0;
  } flags;
  std::vector<std::pair<CLI::App*, std::vector<CLI::Option*>>> subs;

  auto add_common = [&](CLI::App* sub, bool with_level) {
    std::vector<CLI::Option*> opts;
    opts.push_back(sub->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile));
    opts.push_back(sub->add_option("--field", flags.field, "catalog field name"));
    opts.push_back(sub->add_option("--level-min", flags.level_min, "coarsest refinement level"));
    opts.push_back(sub->add_option("--level-max", flags.level_max, "finest refinement level"));
    opts.push_back(sub->add_option("--seed", flags.seed, "seed for curve family and sampling"));
    opts.push_back(sub->add_option("--out", flags.out, "output directory"));
    opts.push_back(sub->add_option("--angle-bound", flags.angle_bound, "lift angle bound in radians (3-D)"));
    opts.push_back(sub->add_option("--format", flags.format, "json, csv or both")
                       ->check(CLI::IsMember({"json", "csv", "both"})));
    if (with_level) opts.push_back(sub->add_option("--level", flags.level, "decomposition level"));
    subs.emplace_back(sub, opts);
  };
  CLI::App* dec = app.add_subcommand("decompose", "decompose a field into f1 - f2 and check the pieces");
  CLI::App* cri = app.add_subcommand("criterion", "variation and turn statistics over a curve family");
  CLI::App* con = app.add_subcommand("converge", "sup-norm behaviour of f1 across refinement levels");
  CLI::App* cat = app.add_subcommand("catalog", "list built-in fields");
  add_common(dec, true);
  add_common(cri, false);
  add_common(con, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cat->parsed()) return cmd_catalog(out);
    RunConfig config;
    for (auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
      if (given("--config")) config = load_config(flags.config);
      if (given("--field")) config.field = FieldSpec::named(flags.field);
      if (given("--level-min")) config.level_min = flags.level_min;
      if (given("--level-max")) config.level_max = flags.level_max;
      if (given("--seed")) config.seed = config.family.seed = flags.seed;
      if (given("--out")) config.out = flags.out;
      if (given("--angle-bound")) config.family.angle_bound = flags.angle_bound;
      if (given("--format")) config.format = flags.format;
      if (sub == dec && given("--level")) config.level = flags.level;
    }
    if (dec->parsed()) return cmd_decompose(config, out);
    if (cri->parsed()) return cmd_criterion(config, out);
    if (con->parsed()) return cmd_converge(config, out);
  } catch (const std::exception& e) {
    err << "dcsplit: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dcsplit
