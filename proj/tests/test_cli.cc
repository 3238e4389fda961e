#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dcsplit/commands.h"
#include "dcsplit/io.h"

using namespace dcsplit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dcsplit_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "dcsplit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config: round trip through JSON is lossless") {
  RunConfig c;
  c.field = FieldSpec::named("gaussian_bump", {{"width", 0.2}});
  c.domain = DomainSpec{{(Vec(2) << 0, 0).finished(), (Vec(2) << 2, 0).finished(), (Vec(2) << 0, 1).finished()},
                        (Vec(2) << 0.5, 0.25).finished()};
  c.level_min = 2;
  c.level_max = 5;
  c.level = 3;
  c.family.kind = FamilyKind::kEllipses;
  c.family.count = 5;
  c.family.seed = 99;
  c.family.angle_bound = 0.3;
  c.probe_count = 17;
  c.seed = 1234567890123ull;
  c.out = "somewhere";
  c.format = "csv";
  c.normalization = "anchor_constant";
  c.thresholds.stabilization = 0.05;
  c.thresholds.growth = 1.7;
  c.thresholds.growth_steps = 3;
  c.convergence_fraction = 0.003;
  c.hinge_tol = 1e-10;
  c.convexity_tol = 3e-9;
  const std::string text = config_to_json(c).dump();
  const RunConfig back = config_from_json(nlohmann::json::parse(text));
  CHECK(back == c);
  CHECK(config_to_json(back).dump() == text);
  CHECK(config_hash(back) == config_hash(c));
  RunConfig d = c;
  d.seed += 1;
  CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("config: box domain and defaults") {
  const RunConfig c = config_from_json({{"field", "saddle"}, {"domain", {{"box", {{0, 0}, {2, 1}}}}}});
  REQUIRE(c.domain.has_value());
  CHECK(c.domain->points.size() == 4);
  const Domain d = make_domain(c);
  CHECK(d.upper()[0] == 2.0);
  CHECK(d.anchor[0] == doctest::Approx(1.0));
  CHECK(c.level_min == RunConfig{}.level_min);
}

TEST_CASE("config: validation names the key and the range") {
  auto message = [](const nlohmann::json& j) -> std::string {
    try {
      validate(config_from_json(j));
    } catch (const ConfigError& e) {
      return e.what();
    }
    return {};
  };
  CHECK(message({{"thresholds", {{"growth", 0.5}}}}).find("thresholds.growth must be > 1") != std::string::npos);
  CHECK(message({{"thresholds", {{"stabilization", 0.0}}}}).find("thresholds.stabilization") != std::string::npos);
  CHECK(message({{"levels", {{"min", 4}, {"max", 2}}}}).find("levels.max") != std::string::npos);
  CHECK(message({{"format", "xml"}}).find("format") != std::string::npos);
  CHECK(message({{"family", {{"angle_bound", 2.0}}}}).find("angle_bound") != std::string::npos);
  CHECK(message({{"field", "nope"}}).find("nope") != std::string::npos);
  CHECK(message({{"probe_count", "many"}}).find("probe_count") != std::string::npos);
  CHECK(message({{"tolerances", {{"hinge", -1.0}}}}).find("tolerances.hinge") != std::string::npos);
  CHECK(message(nlohmann::json::object()).empty());
  CHECK(message(nullptr).find("JSON object") != std::string::npos);
}

TEST_CASE("catalog lists every built-in field") {
  std::string out;
  CHECK(run({"catalog"}, &out) == 0);
  for (const char* name :
       {"affine", "abs1d", "neg_abs1d", "quadratic", "saddle", "gaussian_bump", "osc1d", "dist_to_polygon"})
    CHECK(out.find(name) != std::string::npos);
  CHECK(std::count(out.begin(), out.end(), '\n') == 8);
  CHECK(out.find("not-DC") != std::string::npos);
}

TEST_CASE("decompose: abs1d level 0, affine, saddle level 3") {
  const fs::path dir = scratch("decompose");
  CHECK(run({"decompose", "--field", "abs1d", "--level", "0", "--out", dir.string()}) == 0);
  nlohmann::json s = read_json(dir / "summary.json");
  CHECK(s["hinges"]["convex"] == 1);
  CHECK(s["reconstruction_residual"].get<double>() <= 1e-12);
  CHECK(fs::exists(dir / "decompose.json"));
  CHECK(fs::exists(dir / "decompose_probes.csv"));
  nlohmann::json m = read_json(dir / "manifest.json");
  CHECK(m["command"] == "decompose");
  CHECK(m["config_hash"].get<std::string>().size() == 16);
  CHECK(m.contains("timings_seconds"));
  CHECK(m.contains("version"));

  CHECK(run({"decompose", "--field", "affine", "--level", "2", "--out", dir.string()}) == 0);
  CHECK(read_json(dir / "summary.json")["hinges"]["convex"] == 0);

  CHECK(run({"decompose", "--field", "saddle", "--level", "3", "--out", dir.string(), "--format", "json"}) == 0);
  s = read_json(dir / "summary.json");
  CHECK(s["reconstruction_residual"].get<double>() <= 1e-9);
  CHECK(s["passed"] == true);
  nlohmann::json pair = read_json(dir / "decompose.json")["pair"];
  CHECK(pair["wedges"].size() == s["hinges"]["convex"].get<size_t>());
  CHECK(pair["probe_values"]["f1"].size() == 256);
}

TEST_CASE("criterion: exit codes encode verdicts") {
  const fs::path dir = scratch("criterion");
  CHECK(run({"criterion", "--field", "affine", "--level-max", "4", "--out", dir.string()}) == 0);
  CHECK(run({"criterion", "--field", "saddle", "--level-max", "5", "--out", dir.string()}) == 0);
  const std::string csv = slurp(dir / "criterion.csv");
  CHECK(csv.rfind("level,curve,V_phi,V_r,rho,O_R,sigma\n", 0) == 0);
  const nlohmann::json j = read_json(dir / "criterion.json");
  CHECK(j["consistency"]["consistent"] == true);
  CHECK(j["variation"]["verdict"] == "bounded");
  CHECK(run({"criterion", "--field", "osc1d", "--level-max", "6", "--out", dir.string()}) == 2);
  CHECK(run({"criterion", "--field", "saddle", "--level-min", "1", "--level-max", "2", "--out", dir.string()}) == 3);
}

TEST_CASE("converge: affine zero deltas, osc1d diverging") {
  const fs::path dir = scratch("converge");
  CHECK(run({"converge", "--field", "affine", "--level-max", "3", "--out", dir.string()}) == 0);
  const nlohmann::json j = read_json(dir / "converge.json");
  for (const auto& d : j["sup_deltas"]) CHECK(d.get<double>() == 0.0);
  CHECK(run({"converge", "--field", "osc1d", "--level-max", "7", "--out", dir.string()}) == 2);
  CHECK(read_json(dir / "converge.json")["verdict"] == "diverging");
}

TEST_CASE("flags override config file values") {
  const fs::path dir = scratch("override");
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"field": "saddle", "levels": {"min": 1, "max": 2}, "format": "json"})";
  CHECK(run({"decompose", "--config", cfg.string(), "--field", "abs1d", "--out", (dir / "o").string()}) == 0);
  const nlohmann::json m = read_json(dir / "o" / "manifest.json");
  CHECK(m["config"]["field"]["name"] == "abs1d");
  CHECK(m["config"]["format"] == "json");
  CHECK(read_json(dir / "o" / "summary.json")["level"] == 2);
  CHECK_FALSE(fs::exists(dir / "o" / "decompose_probes.csv"));
}

TEST_CASE("errors exit 1 with a message") {
  std::string err;
  CHECK(run({"decompose", "--field", "nope", "--out", scratch("err").string()}, nullptr, &err) == 1);
  CHECK(err.find("nope") != std::string::npos);
  CHECK(run({"criterion", "--config", "/nonexistent/config.json"}, nullptr, &err) == 1);
  CHECK(run({"bogus"}, nullptr, &err) == 1);
  CHECK(run({}, nullptr, &err) == 1);
  const fs::path dir = scratch("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"thresholds": {"growth": 0.5}})";
  CHECK(run({"criterion", "--config", (dir / "bad.json").string(), "--out", dir.string()}, nullptr, &err) == 1);
  CHECK(err.find("thresholds.growth") != std::string::npos);
}

TEST_CASE("tabulated CSV field on an explicit domain") {
  const fs::path dir = scratch("tabulated");
  fs::create_directories(dir);
  const Domain d = box_domain((Vec(2) << 0, 0).finished(), (Vec(2) << 1, 1).finished());
  const SimplicialMesh m = triangulate(d, 2);
  {
    std::ofstream csv(dir / "field.csv");
    csv << "x,y,value\n";
    for (Index v = 0; v < m.vertex_count(); ++v) {
      const Vec p = m.vertex(v);
      csv << p[0] << "," << p[1] << "," << p[0] * p[0] - p[1] * p[1] << "\n";
    }
  }
  std::ofstream(dir / "run.json") << R"({"field": {"csv": ")" << (dir / "field.csv").string()
                                  << R"(", "level": 2}, "domain": {"box": [[0, 0], [1, 1]]}, "level": 2})";
  CHECK(run({"decompose", "--config", (dir / "run.json").string(), "--out", (dir / "o").string()}) == 0);
  const nlohmann::json tab = read_json(dir / "o" / "summary.json");
  CHECK(run({"decompose", "--field", "saddle", "--level", "2", "--out", (dir / "s").string()}) == 0);
  const nlohmann::json cat = read_json(dir / "s" / "summary.json");
  CHECK(tab["hinges"] == cat["hinges"]);
  CHECK(tab["passed"] == true);

  std::ofstream(dir / "nodomain.json") << R"({"field": {"csv": "x.csv", "level": 2}})";
  CHECK(run({"decompose", "--config", (dir / "nodomain.json").string(), "--out", (dir / "n").string()}) == 1);
}
