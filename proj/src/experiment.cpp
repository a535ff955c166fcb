#include "critnoise/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "critnoise/distances.hpp"
#include "critnoise/stats.hpp"

namespace critnoise {

using nlohmann::json;

const char* const kRecordsHeader =
    "trial_id,n,eps,f_g,f_geps,x_l2_delta,c1_g,c1_geps,diam1_g,diam1_geps,"
    "s2_g,s2_geps,z_g,z_geps,a_holds,c_holds,b_sup";

std::vector<double> EpsRule::eps_for(std::uint64_t n) const {
  if (is_explicit) return values;
  std::vector<double> out;
  out.reserve(c.size());
  for (const double ci : c)
    out.push_back(ci * std::pow(static_cast<double>(n), -a));
  return out;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw std::invalid_argument("n_grid is empty");
  for (const std::uint64_t n : n_grid)
    if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (trials < 2) throw std::invalid_argument("trials must be at least 2");
  if (eps_rule.is_explicit ? eps_rule.values.empty() : eps_rule.c.empty())
    throw std::invalid_argument("eps rule produces no values");
  for (const std::uint64_t n : n_grid)
    for (const double e : eps_rule.eps_for(n))
      if (!(e > 0.0 && e < 1.0))
        throw std::invalid_argument("eps out of (0,1) for some n");
  if (stability.enabled) {
    if (stability.j == 0) throw std::invalid_argument("stability j is 1-based");
    if (!(stability.delta > 0.0))
      throw std::invalid_argument("stability delta must be positive");
  }
  if (output_dir.empty()) throw std::invalid_argument("output_dir is empty");
}

namespace {

json observable_to_json(const Observable& f) {
  json j;
  switch (f.kind) {
    case ObservableKind::size_threshold:
      j["kind"] = "size_threshold";
      j["rank"] = f.rank;
      j["a"] = f.a;
      break;
    case ObservableKind::diameter_threshold:
      j["kind"] = "diameter_threshold";
      j["rank"] = f.rank;
      j["a"] = f.a;
      break;
    case ObservableKind::cycle_in_range:
      j["kind"] = "cycle_in_range";
      j["a"] = f.a;
      j["b"] = f.b;
      break;
    case ObservableKind::l2_ball:
      j["kind"] = "l2_ball";
      j["reference"] = f.reference.entries;
      j["scale"] = f.reference.scale;
      j["radius"] = f.radius;
      break;
  }
  return j;
}

Observable observable_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "size_threshold")
    return Observable::size_threshold(j.at("rank").get<std::uint32_t>(),
                                      j.at("a").get<double>());
  if (kind == "diameter_threshold")
    return Observable::diameter_threshold(j.at("rank").get<std::uint32_t>(),
                                          j.at("a").get<double>());
  if (kind == "cycle_in_range")
    return Observable::cycle_in_range(j.at("a").get<double>(),
                                      j.at("b").get<double>());
  if (kind == "l2_ball") {
    SizeVector ref;
    ref.entries = j.at("reference").get<std::vector<double>>();
    ref.scale = j.value("scale", 0.0);
    return Observable::l2_ball(std::move(ref), j.at("radius").get<double>());
  }
  throw std::invalid_argument("unknown observable kind: " + kind);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t cell_master_seed(std::uint64_t master_seed,
                               std::size_t cell_index) {
  using detail::kGolden;
  using detail::mix64;
  return mix64(mix64(master_seed + kGolden) ^
               ((static_cast<std::uint64_t>(cell_index) + 1) * kGolden));
}

struct AuxRecord {
  std::uint32_t c1 = 0;
  std::uint32_t diam1 = 0;
  double s2 = 0.0;
  std::uint64_t z = 0;
};

AuxRecord compute_aux(const Graph& g) {
  AuxRecord a;
  const ComponentDecomposition d = components(g);
  if (d.count() == 0) return a;
  a.c1 = d.sizes.front();
  a.s2 = susceptibility(d, 2);
  const DistanceStats st = distance_stats(g, d);
  a.diam1 = st.diameters.front();
  a.z = st.z_total;
  return a;
}

json cov_to_json(const CovarianceEstimate& e) {
  json j;
  j["cov"] = e.cov;
  j["cov_std_err"] = e.cov_std_err;
  j["corr_defined"] = e.corr_defined;
  if (e.corr_defined) {
    j["corr"] = e.corr;
    j["corr_std_err"] = e.corr_std_err;
  }
  j["p_pooled"] = e.p_pooled;
  j["mean_f"] = e.mean_f;
  j["mean_feps"] = e.mean_feps;
  j["trials"] = e.trials;
  return j;
}

// Minimal SVG plotting: fixed frame, linear axes, polylines with markers.
class SvgPlot {
 public:
  SvgPlot(double x_lo, double x_hi, double y_lo, double y_hi,
          std::string x_label, std::string y_label, std::string title)
      : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
          << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
          << "\">\n";
    body_ << "<rect width=\"" << kW << "\" height=\"" << kH
          << "\" fill=\"white\"/>\n";
    body_ << "<rect x=\"" << kML << "\" y=\"" << kMT << "\" width=\""
          << kW - kML - kMR << "\" height=\"" << kH - kMT - kMB
          << "\" fill=\"none\" stroke=\"black\"/>\n";
    text(kW / 2.0, kH - 8, title + " | x: " + x_label + ", y: " + y_label,
         "middle", 13);
    for (int i = 0; i <= 4; ++i) {
      const double fx = i / 4.0;
      const double vx = x_lo_ + fx * (x_hi_ - x_lo_);
      const double px = kML + fx * (kW - kML - kMR);
      line(px, kH - kMB, px, kH - kMB + 4, "black");
      text(px, kH - kMB + 16, short_num(vx), "middle", 10);
      const double vy = y_lo_ + fx * (y_hi_ - y_lo_);
      const double py = kH - kMB - fx * (kH - kMT - kMB);
      line(kML - 4, py, kML, py, "black");
      text(kML - 6, py + 3, short_num(vy), "end", 10);
    }
  }

  double px(double x) const {
    return kML + (x - x_lo_) / (x_hi_ - x_lo_) * (kW - kML - kMR);
  }
  double py(double y) const {
    return kH - kMB - (y - y_lo_) / (y_hi_ - y_lo_) * (kH - kMT - kMB);
  }

  void line(double x1, double y1, double x2, double y2,
            const std::string& color) {
    body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
          << "\" y2=\"" << y2 << "\" stroke=\"" << color << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) body_ << px(x) << "," << py(y) << " ";
    body_ << "\"/>\n";
    for (const auto& [x, y] : pts)
      body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
  }

  void error_bar(double x, double y, double half, const std::string& color) {
    const double cx = px(x);
    line(cx, py(y - half), cx, py(y + half), color);
    line(cx - 3, py(y - half), cx + 3, py(y - half), color);
    line(cx - 3, py(y + half), cx + 3, py(y + half), color);
  }

  void text(double x, double y, const std::string& s,
            const std::string& anchor, int size) {
    body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
          << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">"
          << s << "</text>\n";
  }

  void legend(std::size_t slot, const std::string& label,
              const std::string& color) {
    const double x = kML + 10, y = kMT + 14 + 14.0 * slot;
    line(x, y - 4, x + 18, y - 4, color);
    text(x + 22, y, label, "start", 10);
  }

  void save(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << body_.str() << "</svg>\n";
  }

 private:
  static std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
  }

  static constexpr int kW = 640, kH = 440;
  static constexpr int kML = 60, kMR = 20, kMT = 20, kMB = 50;
  double x_lo_, x_hi_, y_lo_, y_hi_;
  std::ostringstream body_;
};

const char* const kPalette[] = {"#1f6feb", "#d1242f", "#1a7f37",
                                "#8250df", "#bf3989", "#9a6700"};

void write_corr_plot(const std::vector<CellSummary>& cells,
                     const std::string& path) {
  double x_lo = 1e300, x_hi = -1e300;
  for (const auto& c : cells) {
    x_lo = std::min(x_lo, c.eps_scaled);
    x_hi = std::max(x_hi, c.eps_scaled);
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  SvgPlot plot(x_lo, x_hi, -0.1, 1.05, "eps * n^(1/3)", "corr",
               "correlation of f before/after noise");
  std::vector<std::uint64_t> ns;
  for (const auto& c : cells)
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const std::string color = kPalette[k % 6];
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : cells) {
      if (c.n != ns[k] || !c.cov.corr_defined) continue;
      pts.emplace_back(c.eps_scaled, c.cov.corr);
    }
    std::sort(pts.begin(), pts.end());
    plot.polyline(pts, color);
    for (const auto& c : cells)
      if (c.n == ns[k] && c.cov.corr_defined)
        plot.error_bar(c.eps_scaled, c.cov.corr, c.cov.corr_std_err, color);
    plot.legend(k, "n=" + std::to_string(ns[k]), color);
  }
  plot.save(path);
}

void write_dx_plot(const std::vector<CellSummary>& cells,
                   const std::vector<std::vector<double>>& dx_per_cell,
                   const std::string& path) {
  double x_hi = 0.0;
  for (const auto& v : dx_per_cell)
    for (const double d : v) x_hi = std::max(x_hi, d);
  if (x_hi <= 0.0) x_hi = 1.0;
  SvgPlot plot(0.0, x_hi, 0.0, 1.05, "||X(G) - X(G_eps)||_2", "ecdf",
               "l2 displacement of the rescaled size vector");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (dx_per_cell[k].empty()) continue;
    const std::string color = kPalette[k % 6];
    std::vector<double> v = dx_per_cell[k];
    std::sort(v.begin(), v.end());
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      pts.emplace_back(v[i], static_cast<double>(i + 1) /
                                 static_cast<double>(v.size()));
    plot.polyline(pts, color);
    char label[64];
    std::snprintf(label, sizeof(label), "n=%llu eps=%.3g",
                  static_cast<unsigned long long>(cells[k].n), cells[k].eps);
    plot.legend(k, label, color);
  }
  plot.save(path);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  ExperimentConfig cfg;
  cfg.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
  cfg.lambda = j.value("lambda", 0.0);
  const json& er = j.at("eps_rule");
  if (er.contains("list")) {
    cfg.eps_rule.is_explicit = true;
    cfg.eps_rule.values = er.at("list").get<std::vector<double>>();
  } else {
    cfg.eps_rule.is_explicit = false;
    cfg.eps_rule.a = er.value("a", 1.0 / 3.0);
    if (er.at("c").is_array())
      cfg.eps_rule.c = er.at("c").get<std::vector<double>>();
    else
      cfg.eps_rule.c = {er.at("c").get<double>()};
  }
  cfg.trials = j.at("trials").get<std::uint64_t>();
  cfg.inner_trials = j.value("inner_trials", std::uint64_t{0});
  cfg.observable = observable_from_json(j.at("observable"));
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.output_dir = j.value("output_dir", std::string("out"));
  cfg.record_aux = j.value("record_aux", false);
  if (j.contains("stability")) {
    const json& s = j.at("stability");
    cfg.stability.enabled = true;
    cfg.stability.delta = s.value("delta", 0.1);
    cfg.stability.j = s.value("j", std::uint32_t{1});
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["n_grid"] = cfg.n_grid;
  j["lambda"] = cfg.lambda;
  if (cfg.eps_rule.is_explicit) {
    j["eps_rule"] = {{"list", cfg.eps_rule.values}};
  } else {
    j["eps_rule"] = {{"a", cfg.eps_rule.a}, {"c", cfg.eps_rule.c}};
  }
  j["trials"] = cfg.trials;
  if (cfg.inner_trials > 0) j["inner_trials"] = cfg.inner_trials;
  j["observable"] = observable_to_json(cfg.observable);
  j["master_seed"] = cfg.master_seed;
  j["output_dir"] = cfg.output_dir;
  if (cfg.record_aux) j["record_aux"] = true;
  if (cfg.stability.enabled)
    j["stability"] = {{"delta", cfg.stability.delta}, {"j", cfg.stability.j}};
  return j.dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  fs::create_directories(fs::path(cfg.output_dir) / "plots");

  ExperimentResult result;
  result.records_path = (fs::path(cfg.output_dir) / "records.csv").string();
  result.summary_path = (fs::path(cfg.output_dir) / "summary.json").string();
  std::ofstream records(result.records_path);
  if (!records)
    throw std::runtime_error("cannot open " + result.records_path);
  records << kRecordsHeader << '\n' << std::flush;

  std::vector<std::vector<double>> dx_per_cell;
  std::size_t cell_index = 0;
  for (const std::uint64_t n : cfg.n_grid) {
    for (const double eps : cfg.eps_rule.eps_for(n)) {
      const NoiseParams params = derive_noise_params(n, cfg.lambda, eps);
      const std::uint64_t cell_seed =
          cell_master_seed(cfg.master_seed, cell_index);
      CellSummary cell;
      cell.n = n;
      cell.eps = eps;
      cell.eps_scaled = eps * std::cbrt(static_cast<double>(n));

      PairCounts counts;
      std::vector<double> dxs;
      std::vector<StabilityTrialResult> stab_rows;
      const bool want_graphs = cfg.record_aux;
      for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        bool f_g, f_geps;
        double dx;
        std::string aux_cols = ",,,,,,,";  // c1 x2, diam x2, s2 x2, z x2
        std::string stab_cols = ",,";      // a_holds, c_holds, b_sup
        const Graph* pg = nullptr;
        const Graph* pgeps = nullptr;
        StabilityTrialResult stab;
        SensitivityTrial sens;
        if (cfg.stability.enabled) {
          stab = run_stability_trial(params, cfg.stability.delta,
                                     cfg.stability.j, cell_seed, t, true);
          pg = &stab.graphs->first;
          pgeps = &stab.graphs->second;
          f_g = evaluate(cfg.observable, *pg);
          f_geps = evaluate(cfg.observable, *pgeps);
          dx = stab.x_l2_delta;
          std::ostringstream sc;
          sc << static_cast<int>(stab.a_holds) << ','
             << static_cast<int>(stab.c_holds) << ',' << stab.b_sup;
          stab_cols = sc.str();
        } else {
          sens = run_sensitivity_trial(params, cfg.observable, cell_seed, t,
                                       want_graphs);
          f_g = sens.f_g;
          f_geps = sens.f_geps;
          dx = sens.x_l2_delta;
          if (want_graphs) {
            pg = &sens.graphs->first;
            pgeps = &sens.graphs->second;
          }
        }
        if (cfg.record_aux && pg != nullptr) {
          const AuxRecord a = compute_aux(*pg);
          const AuxRecord b = compute_aux(*pgeps);
          std::ostringstream ac;
          ac << a.c1 << ',' << b.c1 << ',' << a.diam1 << ',' << b.diam1 << ','
             << fmt(a.s2) << ',' << fmt(b.s2) << ',' << a.z << ',' << b.z;
          aux_cols = ac.str();
        }
        counts.add(f_g, f_geps);
        dxs.push_back(dx);
        if (cfg.stability.enabled) {
          stab.graphs.reset();
          stab_rows.push_back(std::move(stab));
        }
        records << t << ',' << n << ',' << fmt(eps) << ',' << f_g << ','
                << f_geps << ',' << fmt(dx) << ',' << aux_cols << ','
                << stab_cols << '\n'
                << std::flush;
      }
      cell.cov = covariance_from_counts(counts);
      cell.median_dx = median(dxs);
      if (cfg.inner_trials > 0) {
        const std::uint64_t nested_seed =
            detail::mix64(cell_seed ^ detail::kGolden);
        cell.cond_var = estimate_conditional_variance(
            params, cfg.observable, cfg.trials, cfg.inner_trials, nested_seed);
      }
      if (cfg.stability.enabled)
        cell.stability = summarize_stability(
            std::move(stab_rows), cfg.stability.delta, cfg.stability.j);
      dx_per_cell.push_back(std::move(dxs));
      result.cells.push_back(std::move(cell));
      ++cell_index;
    }
  }
  records.close();

  json summary;
  summary["schema_version"] = 1;
  summary["config"] = json::parse(experiment_config_to_json(cfg));
  summary["cells"] = json::array();
  for (const auto& c : result.cells) {
    json jc;
    jc["n"] = c.n;
    jc["eps"] = c.eps;
    jc["eps_scaled"] = c.eps_scaled;
    jc["covariance"] = cov_to_json(c.cov);
    jc["median_x_l2_delta"] = c.median_dx;
    if (c.cond_var) {
      jc["conditional_variance"] = {{"var_hat", c.cond_var->var_hat},
                                    {"std_err", c.cond_var->std_err},
                                    {"grand_mean", c.cond_var->grand_mean},
                                    {"outer", c.cond_var->outer},
                                    {"inner", c.cond_var->inner}};
    }
    if (c.stability) {
      jc["stability"] = {{"freq_a", c.stability->freq_a},
                         {"freq_b", c.stability->freq_b},
                         {"freq_c", c.stability->freq_c},
                         {"median_dx", c.stability->median_dx},
                         {"delta", c.stability->delta},
                         {"j", c.stability->j}};
      if (!std::isnan(c.stability->median_ghp))
        jc["stability"]["median_ghp"] = c.stability->median_ghp;
    }
    summary["cells"].push_back(std::move(jc));
  }
  {
    std::ofstream out(result.summary_path);
    if (!out) throw std::runtime_error("cannot open " + result.summary_path);
    out << summary.dump(2) << '\n';
  }

  const std::string corr_path =
      (fs::path(cfg.output_dir) / "plots" / "corr_vs_eps.svg").string();
  write_corr_plot(result.cells, corr_path);
  result.plot_paths.push_back(corr_path);
  const std::string dx_path =
      (fs::path(cfg.output_dir) / "plots" / "dx_ecdf.svg").string();
  write_dx_plot(result.cells, dx_per_cell, dx_path);
  result.plot_paths.push_back(dx_path);
  return result;
}

}  // namespace critnoise
