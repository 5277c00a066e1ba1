#pragma once

#include "parares/analysis.hpp"
#include "parares/scenario.hpp"
#include "parares/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace parares {

/// Version stamp carried by every file this tool reads or writes.
inline constexpr int format_version = 1;

using ordered_json = nlohmann::ordered_json;

// Configuration round-trip. serialize(parse(s)) is a fixed point: key
// order and number formatting are canonical.
ordered_json to_json(const SimulationConfig& cfg);
SimulationConfig simulation_config_from_json(const ordered_json& j);
std::string serialize_config(const SimulationConfig& cfg);
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config_file(const std::string& path);

ordered_json to_json(const Scenario& sc);
Scenario scenario_from_json(const ordered_json& j);

ordered_json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const ordered_json& j);
SweepSpec load_sweep_file(const std::string& path);

/// Sampled trajectory as CSV:
///   t,phi,v,theta_wrapped,theta_unwrapped,D,u,H,H_drift
/// u is reconstructed through the inverse reduction (nan for the
/// mechanical model); H_drift is the running relative drift.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr,
                          const SystemDefinition& sys);
void write_trajectory_csv_file(const std::string& path, const Trajectory& tr,
                               const SystemDefinition& sys);

ordered_json scenario_report_json(const Scenario& sc, const ScenarioResult& res);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);
void write_sweep_csv_file(const std::string& path, const SweepSpec& spec,
                          const std::vector<SweepRow>& rows);

/// Full unperturbed-structure report for a model: resonance loci, located
/// parabolic resonance vs the closed forms, flatness at c_p, structural
/// classification, and fixed-point slices at D = {1/2, 1, 3/2} d_p.
ordered_json analyze_model_json(const ModelConfig& model);

/// Human-readable rendering of analyze_model_json output.
std::string render_analysis_text(const ordered_json& report);

ordered_json island_report_json(const IslandMeasurement& m);

} // namespace parares
