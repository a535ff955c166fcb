#include "critnoise/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace critnoise {

using nlohmann::json;

std::string condition_report_to_json(const ConditionReport& rep) {
  json j;
  j["inputs"] = {
      {"sigma2", rep.sigma2},   {"sigma3", rep.sigma3},
      {"x_max", rep.x_max},     {"x_min", rep.x_min},
      {"d_max", rep.d_max},     {"sum_x2u", rep.sum_x2u},
      {"q", rep.q},             {"scaling", rep.scaling},
      {"eps", rep.eps},         {"n", rep.n},
  };
  j["checks"] = json::array();
  for (const auto& c : rep.checks)
    j["checks"].push_back(
        {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  j["all_hold"] = rep.all_hold();
  return j.dump(2);
}

std::string space_to_json(const MeasuredMetricSpace& s) {
  json j;
  const std::size_t m = s.size();
  j["points"] = m;
  j["dist"] = s.dense_matrix(1u << 14);
  json mass = json::array();
  for (std::size_t i = 0; i < m; ++i) mass.push_back(s.mass(i));
  j["mass"] = mass;
  return j.dump();
}

MeasuredMetricSpace space_from_json(const std::string& text) {
  const json j = json::parse(text);
  const std::size_t m = j.at("points").get<std::size_t>();
  std::vector<double> dist = j.at("dist").get<std::vector<double>>();
  std::vector<double> mass = j.at("mass").get<std::vector<double>>();
  if (dist.size() != m * m || mass.size() != m)
    throw std::invalid_argument("space JSON shape mismatch");
  MeasuredMetricSpace s =
      MeasuredMetricSpace::dense(std::move(dist), std::move(mass));
  s.validate();
  return s;
}

MeasuredMetricSpace space_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return space_from_json(buf.str());
}

void space_to_json_file(const MeasuredMetricSpace& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << space_to_json(s) << '\n';
}

}  // namespace critnoise
