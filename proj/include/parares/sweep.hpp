#pragma once

#include "parares/config.hpp"
#include "parares/diagnostics.hpp"

#include <string>
#include <vector>

namespace parares {

/// One sweep axis: a named parameter and the explicit values it takes.
/// Parameters: "c", "eps", "beta" (model) and "u0" (initial condition).
struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

struct SweepSpec {
    SimulationConfig base;        // initials[0] seeds every grid point
    std::vector<SweepAxis> axes;  // cartesian product, row-major
    bool measure_island = false;  // add island-width columns per point
    IslandWidthOptions island{};
    int jobs = 0;  // worker threads; 0 picks the hardware concurrency
};

struct SweepRow {
    std::vector<double> coords;  // one value per axis
    RunStatus status = RunStatus::completed;
    double h_drift = 0.0, d_drift = 0.0;
    double max_lat = 0.0, max_dwell = 0.0;
    long jumps = 0;
    int cells_visited = 0;
    double island_width = 0.0, island_center = 0.0, island_predicted = 0.0;
    std::string error;  // nonempty when the grid point failed outright
};

/// Run the grid. Rows come back in grid order regardless of the worker
/// count, and each row is bit-identical to the equivalent standalone run.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

} // namespace parares
