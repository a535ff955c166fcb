#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "critnoise/components.hpp"
#include "critnoise/distances.hpp"
#include "critnoise/estimators.hpp"
#include "critnoise/experiment.hpp"
#include "critnoise/observables.hpp"
#include "critnoise/rng.hpp"
#include "critnoise/sampling.hpp"

using namespace critnoise;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& dir) {
  ExperimentConfig cfg;
  cfg.n_grid = {200};
  cfg.eps_rule.is_explicit = true;
  cfg.eps_rule.values = {0.3};
  cfg.trials = 30;
  cfg.observable = Observable::size_threshold(1, 0.7);
  cfg.master_seed = 4242;
  cfg.output_dir = dir;
  cfg.record_aux = true;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::uint64_t test_cell_seed(std::uint64_t master, std::size_t cell) {
  using detail::kGolden;
  using detail::mix64;
  return mix64(mix64(master + kGolden) ^
               ((static_cast<std::uint64_t>(cell) + 1) * kGolden));
}

struct CleanDir {
  explicit CleanDir(std::string p) : path(std::move(p)) {
    fs::remove_all(path);
  }
  ~CleanDir() { fs::remove_all(path); }
  std::string path;
};

}  // namespace

TEST_CASE("config validation rejects unusable settings") {
  const ExperimentConfig base = small_config("cfgcheck");
  CHECK_NOTHROW(base.validate());

  ExperimentConfig c = base;
  c.trials = 0;
  CHECK_THROWS(c.validate());
  c.trials = 1;
  CHECK_THROWS(c.validate());

  c = base;
  c.n_grid = {};
  CHECK_THROWS(c.validate());
  c.n_grid = {1};
  CHECK_THROWS(c.validate());

  c = base;
  c.eps_rule.values = {0.0};
  CHECK_THROWS(c.validate());
  c.eps_rule.values = {1.0};
  CHECK_THROWS(c.validate());
  c.eps_rule.values = {};
  CHECK_THROWS(c.validate());

  c = base;
  c.eps_rule.is_explicit = false;
  c.eps_rule.c = {400.0};  // eps = 400 * 200^(-1/3) > 1
  CHECK_THROWS(c.validate());

  c = base;
  c.stability.enabled = true;
  c.stability.j = 0;
  CHECK_THROWS(c.validate());
  c.stability.j = 1;
  c.stability.delta = 0.0;
  CHECK_THROWS(c.validate());

  c = base;
  c.output_dir = "";
  CHECK_THROWS(c.validate());
}

TEST_CASE("eps rules expand per n") {
  EpsRule expl;
  expl.is_explicit = true;
  expl.values = {0.1, 0.4};
  CHECK(expl.eps_for(1000) == std::vector<double>{0.1, 0.4});
  CHECK(expl.eps_for(8) == std::vector<double>{0.1, 0.4});

  EpsRule rule;
  rule.is_explicit = false;
  rule.a = 1.0 / 3.0;
  rule.c = {1.0, 4.0};
  const std::vector<double> got = rule.eps_for(1000);
  REQUIRE(got.size() == 2);
  CHECK(got[0] == doctest::Approx(0.1));
  CHECK(got[1] == doctest::Approx(0.4));
}

TEST_CASE("configs survive the json round trip") {
  ExperimentConfig cfg = small_config("roundtrip");
  cfg.lambda = -0.5;
  cfg.inner_trials = 7;
  cfg.stability.enabled = true;
  cfg.stability.delta = 0.25;
  cfg.stability.j = 2;
  const ExperimentConfig back =
      parse_experiment_config(experiment_config_to_json(cfg));
  CHECK(back.n_grid == cfg.n_grid);
  CHECK(back.lambda == cfg.lambda);
  CHECK(back.eps_rule.is_explicit);
  CHECK(back.eps_rule.values == cfg.eps_rule.values);
  CHECK(back.trials == cfg.trials);
  CHECK(back.inner_trials == cfg.inner_trials);
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.output_dir == cfg.output_dir);
  CHECK(back.record_aux == cfg.record_aux);
  CHECK(back.stability.enabled);
  CHECK(back.stability.delta == cfg.stability.delta);
  CHECK(back.stability.j == cfg.stability.j);
  CHECK(back.observable.kind == cfg.observable.kind);
  CHECK(back.observable.rank == cfg.observable.rank);
  CHECK(back.observable.a == cfg.observable.a);

  ExperimentConfig rule_cfg = small_config("roundtrip2");
  rule_cfg.eps_rule.is_explicit = false;
  rule_cfg.eps_rule.a = 0.45;
  rule_cfg.eps_rule.c = {0.5, 2.0};
  const ExperimentConfig back2 =
      parse_experiment_config(experiment_config_to_json(rule_cfg));
  CHECK_FALSE(back2.eps_rule.is_explicit);
  CHECK(back2.eps_rule.a == rule_cfg.eps_rule.a);
  CHECK(back2.eps_rule.c == rule_cfg.eps_rule.c);

  for (Observable f :
       {Observable::diameter_threshold(2, 0.8),
        Observable::cycle_in_range(0.2, 1.5),
        Observable::l2_ball(SizeVector{{1.0, 0.5}, 0.01}, 0.3)}) {
    ExperimentConfig c = small_config("roundtrip3");
    c.observable = f;
    const ExperimentConfig b =
        parse_experiment_config(experiment_config_to_json(c));
    CHECK(b.observable.kind == f.kind);
    CHECK(b.observable.a == f.a);
    CHECK(b.observable.b == f.b);
    CHECK(b.observable.rank == f.rank);
    CHECK(b.observable.radius == f.radius);
    CHECK(b.observable.reference.entries == f.reference.entries);
  }
}

TEST_CASE("hand-written configs parse with defaults and aliases") {
  const std::string text = R"({
    "n_grid": [500, 1000],
    "eps_rule": {"c": 2.0},
    "trials": 5,
    "observable": {"kind": "size_threshold", "rank": 1, "a": 0.5},
    "master_seed": 7
  })";
  const ExperimentConfig cfg = parse_experiment_config(text);
  CHECK(cfg.n_grid.size() == 2);
  CHECK_FALSE(cfg.eps_rule.is_explicit);
  CHECK(cfg.eps_rule.a == doctest::Approx(1.0 / 3.0));
  CHECK(cfg.eps_rule.c == std::vector<double>{2.0});
  CHECK(cfg.lambda == 0.0);
  CHECK(cfg.inner_trials == 0);
  CHECK(cfg.output_dir == "out");
  CHECK_FALSE(cfg.record_aux);
  CHECK_FALSE(cfg.stability.enabled);

  CHECK_THROWS(parse_experiment_config("not json"));
  CHECK_THROWS(parse_experiment_config(R"({"n_grid": [100]})"));
  CHECK_THROWS(parse_experiment_config(R"({
    "n_grid": [100], "eps_rule": {"list": [0.1]}, "trials": 5,
    "observable": {"kind": "nonsense"}, "master_seed": 1
  })"));
}

TEST_CASE("experiment runs are deterministic byte for byte") {
  CleanDir da("exp_det_a"), db("exp_det_b");
  ExperimentConfig ca = small_config(da.path);
  ExperimentConfig cb = small_config(db.path);
  const ExperimentResult ra = run_experiment(ca);
  const ExperimentResult rb = run_experiment(cb);
  REQUIRE(fs::exists(ra.records_path));
  REQUIRE(fs::exists(rb.records_path));
  CHECK(slurp(ra.records_path) == slurp(rb.records_path));
  REQUIRE(ra.cells.size() == 1);
  CHECK(ra.cells[0].cov.trials == 30);
  CHECK(ra.cells[0].cov.cov == rb.cells[0].cov.cov);
  CHECK(ra.plot_paths.size() == 2);
  for (const auto& p : ra.plot_paths) {
    CHECK(fs::exists(p));
    CHECK(slurp(p).find("<svg") != std::string::npos);
  }
}

TEST_CASE("csv rows rebuild from their cell seed and trial id") {
  CleanDir dir("exp_rebuild");
  ExperimentConfig cfg = small_config(dir.path);
  const ExperimentResult res = run_experiment(cfg);

  const std::string csv = slurp(res.records_path);
  std::istringstream lines(csv);
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header == kRecordsHeader);
  CHECK(split_csv(header).size() == 17);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) rows.push_back(split_csv(line));
  REQUIRE(rows.size() == 30);

  const NoiseParams params = derive_noise_params(200, 0.0, 0.3);
  const std::uint64_t cell_seed = test_cell_seed(cfg.master_seed, 0);
  for (const std::size_t t : {0ul, 7ul, 29ul}) {
    const auto& row = rows[t];
    REQUIRE(row.size() == 17);
    CHECK(row[0] == std::to_string(t));
    CHECK(row[1] == "200");
    CHECK(std::stod(row[2]) == doctest::Approx(0.3));
    const SensitivityTrial trial =
        run_sensitivity_trial(params, cfg.observable, cell_seed, t, true);
    CHECK(row[3] == (trial.f_g ? "1" : "0"));
    CHECK(row[4] == (trial.f_geps ? "1" : "0"));
    CHECK(std::stod(row[5]) == trial.x_l2_delta);

    const Graph& g = trial.graphs->first;
    const Graph& geps = trial.graphs->second;
    const ComponentDecomposition dg = components(g);
    const ComponentDecomposition dge = components(geps);
    CHECK(row[6] == std::to_string(dg.sizes.front()));
    CHECK(row[7] == std::to_string(dge.sizes.front()));
    const DistanceStats sg = distance_stats(g, dg);
    const DistanceStats sge = distance_stats(geps, dge);
    CHECK(row[8] == std::to_string(sg.diameters.front()));
    CHECK(row[9] == std::to_string(sge.diameters.front()));
    CHECK(std::stod(row[10]) == doctest::Approx(susceptibility(dg, 2)));
    CHECK(std::stod(row[11]) == doctest::Approx(susceptibility(dge, 2)));
    CHECK(row[12] == std::to_string(sg.z_total));
    CHECK(row[13] == std::to_string(sge.z_total));
    CHECK(row[14] == "");
    CHECK(row[15] == "");
    CHECK(row[16] == "");
  }
}

TEST_CASE("summary json reports the versioned cell estimates") {
  CleanDir dir("exp_summary");
  ExperimentConfig cfg = small_config(dir.path);
  cfg.inner_trials = 10;
  const ExperimentResult res = run_experiment(cfg);
  const nlohmann::json j = nlohmann::json::parse(slurp(res.summary_path));
  CHECK(j.at("schema_version").get<int>() == 1);
  const nlohmann::json& cfg_json = j.at("config");
  CHECK(cfg_json.at("master_seed").get<std::uint64_t>() == 4242);
  REQUIRE(j.at("cells").is_array());
  REQUIRE(j.at("cells").size() == 1);
  const nlohmann::json& cell = j.at("cells")[0];
  CHECK(cell.at("n").get<std::uint64_t>() == 200);
  CHECK(cell.at("eps").get<double>() == doctest::Approx(0.3));
  CHECK(cell.at("eps_scaled").get<double>() ==
        doctest::Approx(0.3 * std::cbrt(200.0)));
  CHECK(std::isfinite(cell.at("covariance").at("cov").get<double>()));
  CHECK(cell.at("covariance").at("trials").get<std::uint64_t>() == 30);
  CHECK(cell.contains("median_x_l2_delta"));
  CHECK(cell.contains("conditional_variance"));
  CHECK(cell.at("conditional_variance").at("inner").get<std::uint64_t>() ==
        10);

  const ExperimentConfig back =
      parse_experiment_config(cfg_json.dump());
  CHECK(back.trials == cfg.trials);
  CHECK(back.observable.a == cfg.observable.a);
}

TEST_CASE("stability mode fills the event columns instead of aux") {
  CleanDir dir("exp_stab");
  ExperimentConfig cfg = small_config(dir.path);
  cfg.n_grid = {300};
  cfg.eps_rule.values = {0.2};
  cfg.trials = 10;
  cfg.record_aux = false;
  cfg.stability.enabled = true;
  cfg.stability.delta = 0.2;
  cfg.stability.j = 1;
  const ExperimentResult res = run_experiment(cfg);

  const std::string csv = slurp(res.records_path);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(lines, line))
    if (!line.empty()) rows.push_back(split_csv(line));
  REQUIRE(rows.size() == 10);

  const NoiseParams params = derive_noise_params(300, 0.0, 0.2);
  const std::uint64_t cell_seed = test_cell_seed(cfg.master_seed, 0);
  for (const std::size_t t : {0ul, 9ul}) {
    const auto& row = rows[t];
    REQUIRE(row.size() == 17);
    const StabilityTrialResult st = run_stability_trial(
        params, cfg.stability.delta, cfg.stability.j, cell_seed, t, true);
    CHECK(row[14] == (st.a_holds ? "1" : "0"));
    CHECK(row[15] == (st.c_holds ? "1" : "0"));
    CHECK(row[16] == std::to_string(st.b_sup));
    CHECK(row[3] == (evaluate(cfg.observable, st.graphs->first) ? "1" : "0"));
    CHECK(row[4] == (evaluate(cfg.observable, st.graphs->second) ? "1" : "0"));
    CHECK(row[6] == "");
  }

  REQUIRE(res.cells.size() == 1);
  REQUIRE(res.cells[0].stability.has_value());
  const nlohmann::json j = nlohmann::json::parse(slurp(res.summary_path));
  const nlohmann::json& stab = j.at("cells")[0].at("stability");
  CHECK(stab.at("freq_a").get<double>() ==
        doctest::Approx(res.cells[0].stability->freq_a));
  CHECK(stab.at("delta").get<double>() == doctest::Approx(0.2));
}

TEST_CASE("size and diameter thresholds read off explicit graphs") {
  // Components: {0,1,2}, {3,4}, {5}, {6}, {7}; n = 8 so n^(2/3) = 4.
  const Graph g{8, {{0, 1}, {1, 2}, {3, 4}}};
  CHECK(evaluate(Observable::size_threshold(1, 0.74), g));
  CHECK_FALSE(evaluate(Observable::size_threshold(1, 0.76), g));
  CHECK(evaluate(Observable::size_threshold(2, 0.49), g));
  CHECK_FALSE(evaluate(Observable::size_threshold(2, 0.51), g));
  CHECK(evaluate(Observable::size_threshold(5, 0.2), g));
  CHECK_FALSE(evaluate(Observable::size_threshold(6, 0.2), g));

  // Path of four vertices: diameter 3; n = 8 so n^(1/3) = 2.
  const Graph p{8, {{0, 1}, {1, 2}, {2, 3}}};
  CHECK(evaluate(Observable::diameter_threshold(1, 1.4), p));
  CHECK_FALSE(evaluate(Observable::diameter_threshold(1, 1.6), p));
  CHECK(evaluate(Observable::diameter_threshold(2, 0.0), p));
  CHECK_FALSE(evaluate(Observable::diameter_threshold(9, 0.0), p));

  CHECK_THROWS(Observable::size_threshold(0, 1.0));
  CHECK_THROWS(Observable::diameter_threshold(0, 1.0));
}

TEST_CASE("cycle windows scale with the cube root and stay open") {
  // Triangle at n = 27: cycle length 3, n^(1/3) = 3.  The window edges get
  // a margin because libm's cbrt(27) is an ulp above 3.
  const Graph tri{27, {{0, 1}, {0, 2}, {1, 2}}};
  CHECK(evaluate(Observable::cycle_in_range(0.9, 1.1), tri));
  CHECK_FALSE(evaluate(Observable::cycle_in_range(1.01, 1.5), tri));
  CHECK_FALSE(evaluate(Observable::cycle_in_range(0.5, 0.99), tri));
  CHECK_FALSE(evaluate(Observable::cycle_in_range(0.4, 0.9), tri));
  const Graph forest{27, {{0, 1}, {1, 2}}};
  CHECK_FALSE(evaluate(Observable::cycle_in_range(0.1, 5.0), forest));
  CHECK_THROWS(Observable::cycle_in_range(0.5, 0.5));
  CHECK_THROWS(Observable::cycle_in_range(-1.0, 0.5));
}

TEST_CASE("l2 balls compare rescaled size vectors") {
  const Graph g{8, {{0, 1}, {1, 2}, {3, 4}}};
  const SizeVector self = size_vector(component_sizes(g), 8);
  CHECK(evaluate(Observable::l2_ball(self, 0.0), g));
  const Graph shifted{8, {{0, 1}, {1, 2}, {2, 3}}};
  CHECK_FALSE(evaluate(Observable::l2_ball(self, 1e-6), shifted));
  CHECK(evaluate(Observable::l2_ball(self, 10.0), shifted));
  CHECK_THROWS(Observable::l2_ball(self, -0.1));

  Rng rng(9900);
  for (int t = 0; t < 50; ++t) {
    const Graph r = sample_gnp(60, 0.02, rng);
    const auto sizes = component_sizes(r);
    const Observable fs = Observable::size_threshold(1, 0.5);
    const Observable fb = Observable::l2_ball(self, 0.4);
    CHECK(evaluate_from_sizes(fs, sizes, 60) == evaluate(fs, r));
    CHECK(evaluate_from_sizes(fb, sizes, 60) == evaluate(fb, r));
  }
  CHECK_THROWS(
      evaluate_from_sizes(Observable::cycle_in_range(0.1, 1.0), {3, 2}, 8));
  CHECK_THROWS(
      evaluate_from_sizes(Observable::diameter_threshold(1, 0.1), {3, 2}, 8));
}

TEST_CASE("observable names are distinct and printable") {
  const std::string a = observable_name(Observable::size_threshold(1, 0.5));
  const std::string b =
      observable_name(Observable::diameter_threshold(1, 0.5));
  const std::string c = observable_name(Observable::cycle_in_range(0.1, 1.0));
  const std::string d =
      observable_name(Observable::l2_ball(SizeVector{{1.0}, 0.1}, 0.5));
  CHECK(a != b);
  CHECK(b != c);
  CHECK(c != d);
  CHECK_FALSE(a.empty());
}
