#include "parares/scenario.hpp"

#include "parares/analysis.hpp"
#include "parares/coords.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parares {

std::unique_ptr<SystemDefinition> ModelConfig::build() const {
    if (kind == "atmospheric") {
        if (profile == "cos_cube")
            return std::make_unique<AtmosphericSystem>(atmospheric);
        if (profile == "sin2phi_gradient")
            return std::make_unique<AtmosphericSystem>(
                atmospheric,
                std::make_shared<SinTwoPhiGradientProfile>(alpha));
        throw std::invalid_argument("ModelConfig: unknown profile " + profile);
    }
    if (kind == "mechanical")
        return std::make_unique<MechanicalSystem>(mechanical);
    throw std::invalid_argument("ModelConfig: unknown model kind " + kind);
}

PhaseState InitialConfig::to_state(const SystemDefinition& sys) const {
    if (kind == "reduced") return PhaseState{x0, v0, theta0, D0};
    if (kind != "physical")
        throw std::invalid_argument("InitialConfig: unknown kind " + kind);
    if (sys.name() != "atmospheric")
        throw std::invalid_argument(
            "InitialConfig: physical initial conditions require the "
            "atmospheric model");
    // The wave phase is given reduced already; feeding lambda = 2*theta0
    // through the reduction at t = 0 reproduces it exactly.
    SphericalState s{2.0 * theta0, phi0, u0, v0};
    return to_reduced(s, 0.0, sys.wave_speed(), sys.wavenumber());
}

namespace {

Scenario make_scenario(const std::string& name, const std::string& title,
                       double c, double beta, double t_end,
                       std::vector<InitialConfig> initials,
                       std::vector<ScenarioAssertion> assertions) {
    Scenario sc;
    sc.name = name;
    sc.title = title;
    sc.config.model.kind = "atmospheric";
    sc.config.model.atmospheric = AtmosphericParams{3, c, 2.5e-4, beta};
    sc.config.initials = std::move(initials);
    sc.config.integration = IntegrationOptions{1e-12, 1e-14, t_end, 0.5, 1e-5};
    sc.assertions = std::move(assertions);
    return sc;
}

InitialConfig physical(double phi0, double v0, double theta0, double u0) {
    InitialConfig ic;
    ic.kind = "physical";
    ic.phi0 = phi0;
    ic.v0 = v0;
    ic.theta0 = theta0;
    ic.u0 = u0;
    return ic;
}

std::vector<Scenario> build_registry() {
    std::vector<Scenario> reg;

    reg.push_back(make_scenario(
        "fig2_0_1",
        "flat parabolic resonance: equatorial start drifts to high latitude",
        0.0, 0.0, 2.0e4,
        {physical(1e-5, 1e-5, 0.0, -1e-4)},
        {{"max-latitude-at-least", 0.8, 0.0, 0},
         {"cells-visited-at-least", 2.0, 0.0, 0},
         {"max-dwell-at-least", 100.0, 0.0, 0}}));

    const InitialConfig near_circle = physical(1e-5, 1e-5, 2.2, 0.5e-11);
    reg.push_back(make_scenario(
        "fig2_0_2a",
        "elliptic regime: wave speed far from resonance keeps motion bounded",
        0.1, 0.0, 2.0e4, {near_circle},
        {{"max-latitude-at-most", 0.1, 0.0, 0}}));
    reg.push_back(make_scenario(
        "fig2_0_2b",
        "intermediate wave speed: growing but still moderate excursions",
        0.01, 0.0, 2.0e4, {near_circle}, {}));
    reg.push_back(make_scenario(
        "fig2_0_2c",
        "near-parabolic wave speed: same start develops large excursions",
        1e-4, 0.0, 2.0e4, {near_circle},
        {{"max-latitude-at-least", 0.3, 0.0, 0}}));

    reg.push_back(make_scenario(
        "fig2_0_3",
        "nearly flat parabolic resonance at weak pressure gradient",
        0.029, 0.03, 2.0e4,
        {physical(1e-5, 1e-5, 0.0, 4.2e-4)},
        {{"max-latitude-at-least", 0.4, 0.0, 0}}));

    reg.push_back(make_scenario(
        "fig2_0_4",
        "parabolic resonance at strong pressure gradient",
        0.24, 0.3, 2.0e4,
        {physical(1e-12, 1e-12, 0.0, 0.24)},
        {{"initial-near-resonant-parabolic", 1e-2, 0.0, 0},
         {"max-latitude-at-least", 0.2, 0.0, 0}}));

    reg.push_back(make_scenario(
        "fig2_0_5",
        "chaotic trajectory vs librational and rotational cylinder companions",
        0.2, 0.3, 2.0e4,
        {physical(1e-5, 1e-5, 0.0, 0.2),
         physical(0.0, 0.0, pi / 4.0, 0.21),
         physical(0.0, 0.0, pi / 4.0, 0.3)},
        {{"on-cylinder", 1e-10, 0.0, 1},
         {"jumps-at-most", 0.0, 0.0, 1},
         {"on-cylinder", 1e-10, 0.0, 2},
         {"jumps-at-least", 10.0, 0.0, 2}}));

    const double three_deg = 3.0 * pi / 180.0;
    reg.push_back(make_scenario(
        "fig2_0_6",
        "near-homoclinic orbit: excursions turn at the analytic latitude",
        -0.25, 0.0, 1.0e4,
        {physical(1e-5, 1e-5, 0.0, -0.25)},
        {{"max-latitude-within", pi / 3.0, three_deg, 0}}));
    reg.push_back(make_scenario(
        "fig2_0_7",
        "near-homoclinic orbit, shifted wave phase",
        -0.25, 0.0, 1.0e4,
        {physical(1e-5, 1e-5, 1.8, -0.25)},
        {{"max-latitude-within", pi / 3.0, three_deg, 0}}));

    return reg;
}

double on_cylinder_excursion(const Trajectory& tr) {
    double m = 0.0;
    for (const auto& s : tr.samples)
        m = std::max({m, std::abs(s.state.x), std::abs(s.state.v)});
    return m;
}

} // namespace

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> registry = build_registry();
    return registry;
}

const Scenario& find_scenario(const std::string& name) {
    for (const auto& sc : scenario_registry())
        if (sc.name == name) return sc;
    throw std::invalid_argument("unknown scenario: " + name);
}

ScenarioResult run_scenario(const Scenario& sc, const ScenarioOverrides& ov) {
    const auto sys = sc.config.model.build();
    IntegrationOptions opts = sc.config.integration;
    if (ov.t_end) opts.t_end = *ov.t_end;
    if (ov.sample_dt) opts.sample_dt = *ov.sample_dt;
    if (ov.rel_tol) opts.rel_tol = *ov.rel_tol;

    ScenarioResult res;
    res.name = sc.name;
    res.all_completed = true;
    for (const auto& init : sc.config.initials) {
        Trajectory tr = integrate(*sys, init.to_state(*sys), opts);
        TrajectoryDiagnostics diag;
        diag.status = tr.status;
        diag.h_drift = tr.h_drift;
        diag.d_drift = tr.d_drift;
        diag.max_lat = max_latitude(tr);
        diag.dwell = dwell_times(tr, sys->wavenumber());
        res.all_completed &= tr.status == RunStatus::completed;
        res.trajectories.push_back(std::move(tr));
        res.diagnostics.push_back(std::move(diag));
    }

    res.passed = res.all_completed;
    for (const auto& a : sc.assertions) {
        if (a.trajectory < 0 ||
            a.trajectory >= static_cast<int>(res.trajectories.size()))
            throw std::invalid_argument("scenario assertion trajectory index "
                                        "out of range");
        const auto& tr = res.trajectories[a.trajectory];
        const auto& diag = res.diagnostics[a.trajectory];
        AssertionOutcome out;
        out.assertion = a;
        if (a.kind == "max-latitude-at-least") {
            out.measured = diag.max_lat;
            out.passed = out.measured >= a.value;
        } else if (a.kind == "max-latitude-at-most") {
            out.measured = diag.max_lat;
            out.passed = out.measured <= a.value;
        } else if (a.kind == "max-latitude-within") {
            out.measured = diag.max_lat;
            out.passed = std::abs(out.measured - a.value) <= a.tol;
        } else if (a.kind == "cells-visited-at-least") {
            out.measured = diag.dwell.cells_visited;
            out.passed = out.measured >= a.value;
        } else if (a.kind == "max-dwell-at-least") {
            out.measured = diag.dwell.max_dwell;
            out.passed = out.measured >= a.value;
        } else if (a.kind == "jumps-at-least") {
            out.measured = static_cast<double>(diag.dwell.jumps);
            out.passed = out.measured >= a.value;
        } else if (a.kind == "jumps-at-most") {
            out.measured = static_cast<double>(diag.dwell.jumps);
            out.passed = out.measured <= a.value;
        } else if (a.kind == "on-cylinder") {
            out.measured = on_cylinder_excursion(tr);
            out.passed = out.measured <= a.value;
        } else if (a.kind == "initial-near-resonant-parabolic") {
            const ResonanceLoci loci = resonance_loci(*sys);
            out.measured = std::abs(tr.initial().D - loci.d_p);
            out.passed = out.measured <= a.value;
        } else {
            throw std::invalid_argument("unknown scenario assertion kind: " +
                                        a.kind);
        }
        res.passed &= out.passed;
        res.outcomes.push_back(out);
    }
    return res;
}

ScenarioResult run_scenario(const std::string& name,
                            const ScenarioOverrides& ov) {
    return run_scenario(find_scenario(name), ov);
}

} // namespace parares
