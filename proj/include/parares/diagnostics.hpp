#pragma once

#include "parares/integrate.hpp"
#include "parares/system.hpp"

#include <vector>

namespace parares {

/// Largest |x| (latitude excursion) along a trajectory.
double max_latitude(const Trajectory& tr);

/// One stay inside a resonance cell. cell is the zonal index in
/// [0, 2k): cell j spans theta in [(4j+1) pi/(4k), (4j+5) pi/(4k)), the
/// partition whose walls sit at the unstable wave phases.
struct CellVisit {
    long cell = 0;
    double t_enter = 0.0, t_exit = 0.0;
    double dwell() const { return t_exit - t_enter; }
};

struct DwellReport {
    int cell_count = 0;       // 2k cells around the circle
    std::vector<CellVisit> visits;
    long jumps = 0;           // visits.size() - 1
    int cells_visited = 0;    // distinct zonal cells
    double max_dwell = 0.0;
};

/// Partition the unwrapped theta history into resonance-cell visits.
/// Transition times are linearly interpolated between samples; a sweep
/// through several walls between two samples produces one visit per cell
/// in passing order.
DwellReport dwell_times(const Trajectory& tr, int k);

struct IslandWidthOptions {
    double horizon_periods = 50.0;  // classification horizon, in pendulum periods
    double rel_tol = 1e-5;          // bisection tolerance relative to the width
    IntegrationOptions integration{1e-12, 1e-14, 0.0, 0.0, 1e-5};
};

struct IslandMeasurement {
    double eps = 0.0, c = 0.0;
    double d_r = 0.0;              // resonant action the island is centered on
    double theta_center = 0.0;     // stable wave phase probed
    double lower_edge = 0.0, upper_edge = 0.0;  // in D
    double measured_width = 0.0;
    double predicted_width = 0.0;  // 8 sqrt(eps A(0)) from the pendulum limit
    double quoted_width = 0.0;     // sqrt(8 eps A(0)), the literature figure
    double center = 0.0;           // midpoint of the measured edges
};

/// Measured width (in D) of the primary resonance island of the
/// atmospheric model on the invariant cylinder x = v = 0, at wave speed c
/// and amplitude eps. Probes start at the stable phase
/// theta = 3 pi / (4k) and are classified librational or rotational by
/// integrating the full system restricted to the cylinder; the island
/// edge is bisected from both sides. Throws std::invalid_argument for
/// non-atmospheric systems, DomainError for eps <= 0.
IslandMeasurement island_width(const SystemDefinition& sys, double c,
                               double eps, const IslandWidthOptions& opt = {});

} // namespace parares
