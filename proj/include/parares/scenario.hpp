#pragma once

#include "parares/config.hpp"
#include "parares/diagnostics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parares {

/// Data-driven check on a scenario outcome, serializable so the registry
/// round-trips. kind selects the measurement and comparison:
///   max-latitude-at-least / -at-most : max |x| vs value
///   max-latitude-within              : |max |x| - value| <= tol
///   cells-visited-at-least           : distinct resonance cells vs value
///   max-dwell-at-least               : longest cell stay vs value
///   jumps-at-least / jumps-at-most   : cell transitions vs value
///   on-cylinder                      : max over samples of max(|x|,|v|) <= value
///   initial-near-resonant-parabolic  : |D(0) - d_p| <= value
struct ScenarioAssertion {
    std::string kind;
    double value = 0.0;
    double tol = 0.0;
    int trajectory = 0;
};

struct Scenario {
    std::string name;
    std::string title;  // one-line description of the regime probed
    SimulationConfig config;
    std::vector<ScenarioAssertion> assertions;
};

struct AssertionOutcome {
    ScenarioAssertion assertion;
    double measured = 0.0;
    bool passed = false;
};

struct TrajectoryDiagnostics {
    RunStatus status = RunStatus::completed;
    double h_drift = 0.0, d_drift = 0.0;
    double max_lat = 0.0;
    DwellReport dwell;
};

struct ScenarioResult {
    std::string name;
    std::vector<Trajectory> trajectories;
    std::vector<TrajectoryDiagnostics> diagnostics;
    std::vector<AssertionOutcome> outcomes;
    bool all_completed = false;
    bool passed = false;  // all trajectories completed and all checks pass
};

/// The built-in scenario registry: the canonical instability regimes,
/// with the integrator settings and qualitative checks frozen alongside.
const std::vector<Scenario>& scenario_registry();

/// Lookup by name; throws std::invalid_argument for unknown names.
const Scenario& find_scenario(const std::string& name);

struct ScenarioOverrides {
    std::optional<double> t_end;
    std::optional<double> sample_dt;
    std::optional<double> rel_tol;
};

/// Integrate every trajectory of the scenario and evaluate its checks.
/// Aborted runs keep their partial trajectories; they fail the scenario
/// but never throw.
ScenarioResult run_scenario(const Scenario& sc, const ScenarioOverrides& ov = {});
ScenarioResult run_scenario(const std::string& name,
                            const ScenarioOverrides& ov = {});

} // namespace parares
