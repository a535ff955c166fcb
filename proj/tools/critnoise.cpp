// Command-line front end.  Subcommands mirror the library layers: graph
// sampling, the sensitivity/stability experiment runner, subcritical
// diagnostics, coalescent cross-checks, excursion sampling, and distance
// computations between serialized measured spaces.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "critnoise/coalescent.hpp"
#include "critnoise/components.hpp"
#include "critnoise/distances.hpp"
#include "critnoise/estimators.hpp"
#include "critnoise/excursions.hpp"
#include "critnoise/experiment.hpp"
#include "critnoise/graph.hpp"
#include "critnoise/json_io.hpp"
#include "critnoise/metric_space.hpp"
#include "critnoise/sampling.hpp"
#include "critnoise/stats.hpp"
#include "critnoise/subcritical.hpp"

namespace {

using nlohmann::json;
using namespace critnoise;

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("CRITNOISE_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) omp_set_num_threads(k);
  }
#endif
}

int cmd_sample(std::uint64_t n, double lambda, double eps, bool with_eps,
               std::uint64_t seed, std::uint64_t trial,
               const std::string& out) {
  if (!with_eps) {
    const double p = derive_noise_params(n, lambda, 0.0).p;
    Rng rng = derive_stream(seed, trial, StreamPurpose::core);
    const Graph g = sample_gnp(n, p, rng);
    if (out == "-")
      write_edge_list(std::cout, g);
    else
      write_edge_list_file(out, g);
    return 0;
  }
  const NoiseParams params = derive_noise_params(n, lambda, eps);
  const SprinklingTriple triple = sample_sprinkling_triple(params, seed, trial);
  write_edge_list_file(out + ".g0", triple.core);
  write_edge_list_file(out + ".g1", triple.g1);
  write_edge_list_file(out + ".g1eps", triple.g1_eps);
  std::cerr << "wrote " << out << ".g0 " << out << ".g1 " << out << ".g1eps\n";
  return 0;
}

ExperimentConfig load_config_with_seed(const std::string& path, bool has_seed,
                                       std::uint64_t seed) {
  ExperimentConfig cfg = load_experiment_config(path);
  if (has_seed) cfg.master_seed = seed;
  return cfg;
}

int report_experiment(const ExperimentResult& res) {
  for (const auto& c : res.cells) {
    std::cout << "n=" << c.n << " eps=" << c.eps
              << " eps*n^(1/3)=" << c.eps_scaled;
    if (c.cov.corr_defined)
      std::cout << " corr=" << c.cov.corr << " (se " << c.cov.corr_std_err
                << ")";
    else
      std::cout << " corr undefined (p=" << c.cov.p_pooled << ")";
    std::cout << " median|dX|=" << c.median_dx;
    if (c.stability)
      std::cout << " A:" << c.stability->freq_a << " B:" << c.stability->freq_b
                << " C:" << c.stability->freq_c;
    std::cout << '\n';
  }
  std::cout << "records: " << res.records_path << '\n'
            << "summary: " << res.summary_path << '\n';
  for (const auto& p : res.plot_paths) std::cout << "plot: " << p << '\n';
  return 0;
}

int cmd_subcritical(std::uint64_t n, double theta, double lambda,
                    std::uint64_t trials, std::uint64_t seed, bool z_stats,
                    bool extremes, std::uint32_t levels,
                    std::uint64_t level_roots, std::uint64_t level_graphs) {
  SubcriticalOptions opt;
  opt.z_stats = z_stats;
  opt.extremes = extremes;
  const SubcriticalSummary s =
      subcritical_stats(n, theta, lambda, trials, seed, opt);
  json j;
  j["n"] = s.n;
  j["theta"] = s.theta;
  j["trials"] = s.trials;
  j["s2"] = {{"mean", s.mean_s2}, {"predicted", s.pred_s2}};
  j["s3"] = {{"mean", s.mean_s3}, {"predicted", s.pred_s3}};
  if (z_stats) {
    j["z"] = {{"mean", s.mean_z},
              {"predicted", s.pred_z},
              {"variance", s.var_z},
              {"variance_cap", s.var_z_cap}};
  }
  if (extremes) {
    j["c1"] = {{"median", s.median_c1},
               {"center", s.center_c1},
               {"halfwidth", s.c1_halfwidth}};
    j["diameter"] = {{"bound", s.diam_bound},
                     {"within_frac", s.diam_within_frac}};
  }
  if (levels > 0) {
    j["levels"] = json::array();
    for (const LevelMean& lm :
         level_mean_profile(n, theta, lambda, level_graphs, level_roots,
                            levels, seed)) {
      j["levels"].push_back({{"k", lm.k},
                             {"mean", lm.mean},
                             {"std_err", lm.std_err},
                             {"lo", lm.lo},
                             {"hi", lm.hi}});
    }
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_coalescent_check(std::uint64_t n, double lambda, double eps,
                         std::uint64_t seed, std::uint64_t draws,
                         double alpha) {
  const NoiseParams params = derive_noise_params(n, lambda, eps);
  Rng core_rng = derive_stream(seed, 0, StreamPurpose::core);
  const Graph core = sample_gnp(n, params.p0, core_rng);
  const CoalescentSetup setup = coalescent_params(core, params.p1);

  std::vector<double> coalesced, sprinkled;
  coalesced.reserve(draws);
  sprinkled.reserve(draws);
  for (std::uint64_t t = 0; t < draws; ++t) {
    Rng wr = derive_stream(seed, t, StreamPurpose::coalescent);
    const WeightedGraph w = sample_W(setup.x, setup.q, wr);
    coalesced.push_back(w.component_weights.empty()
                            ? 0.0
                            : w.component_weights.front());
    Rng sr = derive_stream(seed, t, StreamPurpose::sprinkle1);
    const Graph g1 = sprinkle_onto(core, params.p1, sr);
    const double scale = std::pow(static_cast<double>(n), -2.0 / 3.0);
    sprinkled.push_back(scale * largest_component_size(g1));
  }
  const double ks = ks_statistic(coalesced, sprinkled);
  const double thresh = ks_threshold(draws, draws, alpha);
  json j;
  j["n"] = n;
  j["eps"] = eps;
  j["q"] = setup.q;
  j["draws"] = draws;
  j["ks"] = ks;
  j["threshold"] = thresh;
  j["alpha"] = alpha;
  j["consistent"] = ks < thresh;
  std::cout << j.dump(2) << '\n';
  return ks < thresh ? 0 : 1;
}

int cmd_bbsw_check(std::uint64_t n, double lambda, double eps,
                   std::uint64_t seed, double eta0, double r0) {
  const NoiseParams params = derive_noise_params(n, lambda, eps);
  Rng core_rng = derive_stream(seed, 0, StreamPurpose::core);
  const Graph core = sample_gnp(n, params.p0, core_rng);
  const ComponentDecomposition d = components(core);
  const DistanceStats ds = distance_stats(core, d);
  const SizeVector x = size_vector(d);
  const double q = std::pow(static_cast<double>(n), 4.0 / 3.0) *
                   (-std::log1p(-params.p1));
  const ConditionReport aldous =
      check_aldous_conditions(x.entries, q, lambda, eps, n);
  const double scale = std::pow(static_cast<double>(n), -1.0 / 3.0);
  const ConditionReport bbsw = check_bbsw_conditions(
      x.entries, ds.u, scale * ds.d_max, q, eps, n, eta0, r0);
  std::cout << "{\"aldous\": " << condition_report_to_json(aldous)
            << ", \"bbsw\": " << condition_report_to_json(bbsw) << "}\n";
  return aldous.all_hold() && bbsw.all_hold() ? 0 : 1;
}

int cmd_excursions(double lambda, double horizon, double dt,
                   std::uint64_t trials, std::uint64_t seed,
                   const std::string& out) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (out != "-") {
    file.open(out);
    if (!file) {
      std::cerr << "cannot open " << out << '\n';
      return 1;
    }
    os = &file;
  }
  *os << "trial_id,rank,length\n";
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = derive_stream(seed, t, StreamPurpose::excursion);
    const ExcursionSequence seq = sample_excursions(lambda, horizon, dt, rng);
    for (std::size_t r = 0; r < seq.lengths.size(); ++r)
      *os << t << ',' << (r + 1) << ',' << seq.lengths[r] << '\n';
  }
  return 0;
}

int cmd_ghp(const std::string& path_a, const std::string& path_b,
            std::size_t cap) {
  const MeasuredMetricSpace a = space_from_json_file(path_a);
  const MeasuredMetricSpace b = space_from_json_file(path_b);
  const double v = ghp_exact(a, b, cap);
  json j;
  j["points_a"] = a.size();
  j["points_b"] = b.size();
  j["ghp"] = v;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{
      "Monte Carlo toolkit for noise on near-critical random graphs"};
  app.require_subcommand(1);

  std::uint64_t n = 100000, trials = 100, seed = 1, trial = 0, draws = 10000;
  double lambda = 0.0, eps = 0.1, theta = 0.1, alpha = 0.01;
  double delta = 0.1, eta0 = 0.25, r0 = 8.0;
  double horizon = 20.0, dt = 1e-4;
  std::uint32_t jrank = 1, levels = 0;
  std::uint64_t level_roots = 1000, level_graphs = 10;
  std::size_t cap = 8;
  std::string out = "-", config_path, path_a, path_b;
  bool z_stats = false, extremes = false;

  auto* sample = app.add_subcommand("sample", "draw one graph or triple");
  sample->add_option("--n", n, "vertex count")->required();
  sample->add_option("--lambda", lambda, "criticality parameter");
  auto* eps_opt =
      sample->add_option("--eps", eps, "noise level; emits a triple");
  sample->add_option("--seed", seed, "master seed");
  sample->add_option("--trial", trial, "trial id for stream derivation");
  sample->add_option("--out", out, "output path, - for stdout");

  auto* sens = app.add_subcommand("sensitivity", "run a sensitivity sweep");
  sens->add_option("--config", config_path, "JSON config")->required();
  auto* sens_seed = sens->add_option("--seed", seed, "override master_seed");

  auto* stab = app.add_subcommand("stability", "run a stability sweep");
  stab->add_option("--config", config_path, "JSON config")->required();
  auto* stab_seed = stab->add_option("--seed", seed, "override master_seed");
  auto* stab_delta =
      stab->add_option("--delta", delta, "attachment depth ratio");
  auto* stab_j = stab->add_option("--j", jrank, "component rank, 1-based");

  auto* subc =
      app.add_subcommand("subcritical-stats", "core-graph diagnostics");
  subc->add_option("--n", n, "vertex count")->required();
  subc->add_option("--theta", theta, "1 - n p0")->required();
  subc->add_option("--lambda", lambda, "criticality parameter");
  subc->add_option("--trials", trials, "independent cores");
  subc->add_option("--seed", seed, "master seed");
  subc->add_flag("--z-stats", z_stats, "collect Z mean/variance");
  subc->add_flag("--extremes", extremes, "collect |C1| and diameter stats");
  subc->add_option("--levels", levels, "also report BFS level means up to k");
  subc->add_option("--level-roots", level_roots, "roots per graph");
  subc->add_option("--level-graphs", level_graphs, "graphs for level means");

  auto* coal = app.add_subcommand("coalescent-check",
                                  "coalescent vs sprinkle, one fixed core");
  coal->add_option("--n", n, "vertex count")->required();
  coal->add_option("--eps", eps, "noise level")->required();
  coal->add_option("--lambda", lambda, "criticality parameter");
  coal->add_option("--draws", draws, "draws per side");
  coal->add_option("--alpha", alpha, "KS level");
  coal->add_option("--seed", seed, "master seed");

  auto* bbsw = app.add_subcommand("bbsw-check",
                                  "convergence conditions on a sampled core");
  bbsw->add_option("--n", n, "vertex count")->required();
  bbsw->add_option("--eps", eps, "noise level")->required();
  bbsw->add_option("--lambda", lambda, "criticality parameter");
  bbsw->add_option("--eta0", eta0, "small-weight cutoff exponent");
  bbsw->add_option("--r0", r0, "moment power");
  bbsw->add_option("--seed", seed, "master seed");

  auto* exc = app.add_subcommand("excursions", "reflected-walk excursions");
  exc->add_option("--lambda", lambda, "drift parameter");
  exc->add_option("--horizon", horizon, "time horizon");
  exc->add_option("--dt", dt, "grid step");
  exc->add_option("--trials", trials, "independent paths");
  exc->add_option("--seed", seed, "master seed");
  exc->add_option("--out", out, "CSV path, - for stdout");

  auto* ghp = app.add_subcommand("ghp", "distance between serialized spaces");
  ghp->add_option("space_a", path_a, "first space JSON")->required();
  ghp->add_option("space_b", path_b, "second space JSON")->required();
  ghp->add_option("--cap", cap, "max correspondence pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed())
      return cmd_sample(n, lambda, eps, eps_opt->count() > 0, seed, trial,
                        out);
    if (sens->parsed()) {
      ExperimentConfig cfg = load_config_with_seed(
          config_path, sens_seed->count() > 0, seed);
      cfg.stability.enabled = false;
      return report_experiment(run_experiment(cfg));
    }
    if (stab->parsed()) {
      ExperimentConfig cfg = load_config_with_seed(
          config_path, stab_seed->count() > 0, seed);
      cfg.stability.enabled = true;
      if (stab_delta->count() > 0) cfg.stability.delta = delta;
      if (stab_j->count() > 0) cfg.stability.j = jrank;
      cfg.validate();
      return report_experiment(run_experiment(cfg));
    }
    if (subc->parsed())
      return cmd_subcritical(n, theta, lambda, trials, seed, z_stats,
                             extremes, levels, level_roots, level_graphs);
    if (coal->parsed())
      return cmd_coalescent_check(n, lambda, eps, seed, draws, alpha);
    if (bbsw->parsed()) return cmd_bbsw_check(n, lambda, eps, seed, eta0, r0);
    if (exc->parsed())
      return cmd_excursions(lambda, horizon, dt, trials, seed, out);
    if (ghp->parsed()) return cmd_ghp(path_a, path_b, cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
