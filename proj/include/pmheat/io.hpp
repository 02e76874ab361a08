#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pmheat/analysis.hpp"
#include "pmheat/cartesian.hpp"
#include "pmheat/picard.hpp"
#include "pmheat/potential.hpp"

namespace pmheat::io {

using json = nlohmann::ordered_json;

/// %.17g formatting, so regression diffs of CSV artifacts are exact.
std::string format17(double v);

json potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const json& j);

json threshold_to_json(const ThresholdReport& report);
json solve_report_to_json(const SolveReport& report);
json dependence_to_json(const DependenceReport& report);
json crosscheck_to_json(const CrosscheckReport& report);

/// Long-format trajectory dump: "t,rho,h".
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Series dump: "t,norm".
void write_series_csv(std::ostream& os, const AsymptoticSeries& series);

} // namespace pmheat::io
