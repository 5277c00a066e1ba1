#include "parares/sweep.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace parares {

namespace {

void apply_axis(SimulationConfig& cfg, const std::string& param, double value) {
    const bool atmospheric = cfg.model.kind == "atmospheric";
    if (param == "c") {
        (atmospheric ? cfg.model.atmospheric.c : cfg.model.mechanical.c) = value;
    } else if (param == "eps") {
        (atmospheric ? cfg.model.atmospheric.eps : cfg.model.mechanical.eps) =
            value;
    } else if (param == "beta") {
        if (!atmospheric)
            throw std::invalid_argument("sweep: beta only applies to the "
                                        "atmospheric model");
        cfg.model.atmospheric.beta = value;
    } else if (param == "u0") {
        if (cfg.initials.empty() || cfg.initials.front().kind != "physical")
            throw std::invalid_argument("sweep: u0 requires a physical "
                                        "initial condition");
        cfg.initials.front().u0 = value;
    } else {
        throw std::invalid_argument("sweep: unknown parameter " + param);
    }
}

SweepRow run_point(const SweepSpec& spec, const std::vector<double>& coords) {
    SweepRow row;
    row.coords = coords;
    try {
        SimulationConfig cfg = spec.base;
        for (size_t a = 0; a < spec.axes.size(); ++a)
            apply_axis(cfg, spec.axes[a].param, coords[a]);

        const auto sys = cfg.model.build();
        const Trajectory tr =
            integrate(*sys, cfg.initials.front().to_state(*sys),
                      cfg.integration);
        row.status = tr.status;
        row.h_drift = tr.h_drift;
        row.d_drift = tr.d_drift;
        row.max_lat = max_latitude(tr);
        const DwellReport dwell = dwell_times(tr, sys->wavenumber());
        row.max_dwell = dwell.max_dwell;
        row.jumps = dwell.jumps;
        row.cells_visited = dwell.cells_visited;

        if (spec.measure_island) {
            const IslandMeasurement m =
                island_width(*sys, sys->wave_speed(), sys->perturbation(),
                             spec.island);
            row.island_width = m.measured_width;
            row.island_center = m.center;
            row.island_predicted = m.predicted_width;
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.axes.empty())
        throw std::invalid_argument("sweep: at least one axis required");
    if (spec.base.initials.empty())
        throw std::invalid_argument("sweep: base config has no initial "
                                    "condition");
    for (const auto& ax : spec.axes)
        if (ax.values.empty())
            throw std::invalid_argument("sweep: axis " + ax.param +
                                        " has no values");

    size_t total = 1;
    for (const auto& ax : spec.axes) total *= ax.values.size();

    auto coords_of = [&](size_t idx) {
        std::vector<double> coords(spec.axes.size());
        for (size_t a = spec.axes.size(); a-- > 0;) {
            const auto& vals = spec.axes[a].values;
            coords[a] = vals[idx % vals.size()];
            idx /= vals.size();
        }
        return coords;
    };

    std::vector<SweepRow> rows(total);
    unsigned jobs = spec.jobs > 0
                        ? static_cast<unsigned>(spec.jobs)
                        : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(total));

    if (jobs <= 1) {
        for (size_t i = 0; i < total; ++i) rows[i] = run_point(spec, coords_of(i));
        return rows;
    }

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
            rows[i] = run_point(spec, coords_of(i));
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return rows;
}

} // namespace parares
