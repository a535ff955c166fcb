#pragma once

// JSON forms of the condition reports and measured metric spaces.
//
// A space serializes as {"points": m, "dist": [m*m row-major], "mass": [m]};
// a condition report as its inputs plus one {name, lhs, rhs, holds} record
// per inequality.

#include <string>

#include "critnoise/coalescent.hpp"
#include "critnoise/metric_space.hpp"

namespace critnoise {

std::string condition_report_to_json(const ConditionReport& rep);

std::string space_to_json(const MeasuredMetricSpace& s);
MeasuredMetricSpace space_from_json(const std::string& text);

MeasuredMetricSpace space_from_json_file(const std::string& path);
void space_to_json_file(const MeasuredMetricSpace& s, const std::string& path);

}  // namespace critnoise
