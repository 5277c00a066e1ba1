#pragma once

#include "parares/system.hpp"

#include <string>
#include <vector>

namespace parares {

enum class RunStatus { completed, aborted_drift, aborted_domain };

const char* to_string(RunStatus s);

struct IntegrationOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double t_end = 0.0;      // > 0
    double sample_dt = 0.0;  // > 0; samples at exact multiples, plus t_end
    double drift_abort = 1e-5;  // relative H drift that aborts the run
};

struct Sample {
    double t;
    PhaseState state;
};

/// Integration output. Samples are the step-aligned states at
/// t = 0, sample_dt, 2*sample_dt, ..., t_end (the stepper lands on each
/// sample time exactly instead of interpolating). On an abort the samples
/// collected so far are retained, including the offending one.
struct Trajectory {
    std::vector<Sample> samples;
    double h_drift = 0.0;  // max_t |H(t) - H(0)| / max(1, |H(0)|)
    double d_drift = 0.0;  // same measure for D; meaningful when eps = 0
    RunStatus status = RunStatus::completed;

    const PhaseState& initial() const { return samples.front().state; }
    const PhaseState& final_state() const { return samples.back().state; }
    double duration() const { return samples.back().t; }
};

/// Adaptive eighth-order Dormand-Prince integration of the canonical flow
/// from p0 over [0, t_end]. Deterministic: identical inputs give
/// bit-identical trajectories. The Hamiltonian is evaluated at every
/// sample; exceeding drift_abort stops the run with status aborted_drift,
/// leaving the chart stops it with aborted_domain.
Trajectory integrate(const SystemDefinition& sys, const PhaseState& p0,
                     const IntegrationOptions& opts);

/// Drift summary over a trajectory, windowed by time decade, so that slow
/// secular error growth is visible at a glance.
struct ConservationReport {
    struct Window {
        double t_from, t_to;
        double h_drift, d_drift;  // max within the window
    };
    double h_drift = 0.0, d_drift = 0.0;
    std::vector<Window> windows;
};

ConservationReport conservation_report(const Trajectory& tr,
                                       const SystemDefinition& sys);

} // namespace parares
