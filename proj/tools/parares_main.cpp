// Command-line front end: simulate | scenario | sweep | analyze | island-width.
// Exit codes: 0 success, 1 failed run or failed scenario check, 2 bad usage.

#include "parares/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace parares;

namespace {

struct ModelFlags {
    std::string model = "atmospheric";
    int k = 3;
    double c = 0.0, eps = 0.0, beta = 0.0;
    std::string profile = "cos_cube";
    double alpha = 0.0;
    double a1 = 1.0, a2 = 0.0, a3 = 1.0, b = 0.5;
};

struct InitialFlags {
    bool reduced = false;
    double phi0 = 0.0, v0 = 0.0, theta0 = 0.0, u0 = 0.0;
    double x0 = 0.0, D0 = 1.0;
};

struct IntegrationFlags {
    double tol = 1e-12, abs_tol = 1e-14;
    double t_end = 100.0, sample_dt = 0.5, drift_abort = 1e-5;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
    cmd->add_option("--model", mf.model, "Model family")
        ->check(CLI::IsMember({"atmospheric", "mechanical"}));
    cmd->add_option("--k", mf.k, "Wavenumber");
    cmd->add_option("--c", mf.c, "Wave speed");
    cmd->add_option("--eps", mf.eps, "Perturbation amplitude");
    cmd->add_option("--beta", mf.beta, "Pressure-gradient strength (atmospheric)");
    cmd->add_option("--profile", mf.profile, "Pressure profile (atmospheric)")
        ->check(CLI::IsMember({"cos_cube", "sin2phi_gradient"}));
    cmd->add_option("--alpha", mf.alpha, "sin2phi_gradient profile parameter");
    cmd->add_option("--a1", mf.a1, "Mechanical stiffness a1");
    cmd->add_option("--a2", mf.a2, "Mechanical asymmetry a2");
    cmd->add_option("--a3", mf.a3, "Mechanical quartic stiffness a3");
    cmd->add_option("--b", mf.b, "Mechanical inertia offset b");
}

void add_initial_flags(CLI::App* cmd, InitialFlags& f) {
    cmd->add_flag("--reduced", f.reduced,
                  "Initial condition is (x0, v0, theta0, D0) instead of "
                  "physical (phi0, v0, theta0, u0)");
    cmd->add_option("--phi0", f.phi0, "Initial latitude");
    cmd->add_option("--v0", f.v0, "Initial meridional velocity");
    cmd->add_option("--theta0", f.theta0, "Initial wave phase");
    cmd->add_option("--u0", f.u0, "Initial zonal velocity");
    cmd->add_option("--x0", f.x0, "Initial x (reduced)");
    cmd->add_option("--D0", f.D0, "Initial D (reduced)");
}

void add_integration_flags(CLI::App* cmd, IntegrationFlags& f) {
    cmd->add_option("--tol", f.tol, "Relative integration tolerance");
    cmd->add_option("--abs-tol", f.abs_tol, "Absolute integration tolerance");
    cmd->add_option("--t-end", f.t_end, "Integration end time");
    cmd->add_option("--sample-dt", f.sample_dt, "Sample spacing");
    cmd->add_option("--drift-abort", f.drift_abort,
                    "Relative energy drift that aborts the run");
}

ModelConfig model_from_flags(const ModelFlags& mf) {
    ModelConfig m;
    m.kind = mf.model;
    if (mf.model == "atmospheric") {
        m.atmospheric = AtmosphericParams{mf.k, mf.c, mf.eps, mf.beta};
        m.profile = mf.profile;
        m.alpha = mf.alpha;
    } else {
        m.mechanical =
            MechanicalParams{mf.a1, mf.a2, mf.a3, mf.b, mf.c, mf.eps, mf.k};
    }
    return m;
}

// Assemble the effective config: file first, then every explicitly passed
// flag on top.
SimulationConfig effective_config(const CLI::App* cmd, const std::string& path,
                                  const ModelFlags& mf, const InitialFlags& inf,
                                  const IntegrationFlags& itf) {
    SimulationConfig cfg;
    const bool from_file = !path.empty();
    if (from_file) cfg = load_config_file(path);

    auto passed = [&](const std::string& name) {
        return cmd->count(name) > 0;
    };

    if (!from_file || passed("--model") || passed("--k") || passed("--c") ||
        passed("--eps") || passed("--beta") || passed("--profile") ||
        passed("--alpha") || passed("--a1") || passed("--a2") ||
        passed("--a3") || passed("--b")) {
        ModelFlags eff = mf;
        if (from_file) {
            // keep file values for anything not explicitly overridden
            const ModelConfig& fm = cfg.model;
            if (!passed("--model")) eff.model = fm.kind;
            if (eff.model == "atmospheric") {
                if (!passed("--k")) eff.k = fm.atmospheric.k;
                if (!passed("--c")) eff.c = fm.atmospheric.c;
                if (!passed("--eps")) eff.eps = fm.atmospheric.eps;
                if (!passed("--beta")) eff.beta = fm.atmospheric.beta;
                if (!passed("--profile")) eff.profile = fm.profile;
                if (!passed("--alpha")) eff.alpha = fm.alpha;
            } else {
                if (!passed("--k")) eff.k = fm.mechanical.k;
                if (!passed("--c")) eff.c = fm.mechanical.c;
                if (!passed("--eps")) eff.eps = fm.mechanical.eps;
                if (!passed("--a1")) eff.a1 = fm.mechanical.a1;
                if (!passed("--a2")) eff.a2 = fm.mechanical.a2;
                if (!passed("--a3")) eff.a3 = fm.mechanical.a3;
                if (!passed("--b")) eff.b = fm.mechanical.b;
            }
        }
        cfg.model = model_from_flags(eff);
    }

    const bool any_initial_flag = passed("--reduced") || passed("--phi0") ||
                                  passed("--v0") || passed("--theta0") ||
                                  passed("--u0") || passed("--x0") ||
                                  passed("--D0");
    if (!from_file || any_initial_flag) {
        InitialConfig ic;
        ic.kind = inf.reduced ? "reduced" : "physical";
        ic.phi0 = inf.phi0;
        ic.v0 = inf.v0;
        ic.theta0 = inf.theta0;
        ic.u0 = inf.u0;
        ic.x0 = inf.x0;
        ic.D0 = inf.D0;
        if (cfg.model.kind == "mechanical") ic.kind = "reduced";
        cfg.initials = {ic};
    }

    if (!from_file || passed("--tol")) cfg.integration.rel_tol = itf.tol;
    if (!from_file || passed("--abs-tol")) cfg.integration.abs_tol = itf.abs_tol;
    if (!from_file || passed("--t-end")) cfg.integration.t_end = itf.t_end;
    if (!from_file || passed("--sample-dt"))
        cfg.integration.sample_dt = itf.sample_dt;
    if (!from_file || passed("--drift-abort"))
        cfg.integration.drift_abort = itf.drift_abort;
    return cfg;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

int cmd_simulate(const SimulationConfig& cfg, const std::string& out_dir) {
    const auto sys = cfg.model.build();
    bool ok = true;
    for (size_t i = 0; i < cfg.initials.size(); ++i) {
        const Trajectory tr =
            integrate(*sys, cfg.initials[i].to_state(*sys), cfg.integration);
        ok &= tr.status == RunStatus::completed;

        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            const std::string base =
                out_dir + "/trajectory" +
                (cfg.initials.size() > 1 ? "_" + std::to_string(i) : "");
            write_trajectory_csv_file(base + ".csv", tr, *sys);
        } else {
            write_trajectory_csv(std::cout, tr, *sys);
        }

        const ConservationReport cons = conservation_report(tr, *sys);
        std::cerr << "trajectory " << i << ": " << to_string(tr.status)
                  << ", samples " << tr.samples.size() << ", h_drift "
                  << cons.h_drift << ", d_drift " << cons.d_drift << "\n";
    }
    if (!out_dir.empty()) {
        std::ofstream out(out_dir + "/config.json");
        out << serialize_config(cfg);
    }
    return ok ? 0 : 1;
}

int cmd_scenario(const std::string& name, bool all, bool list,
                 const std::string& out_dir, const ScenarioOverrides& ov) {
    if (list) {
        for (const auto& sc : scenario_registry())
            std::cout << sc.name << "  " << sc.title << "\n";
        return 0;
    }
    std::vector<const Scenario*> todo;
    if (all) {
        for (const auto& sc : scenario_registry()) todo.push_back(&sc);
    } else if (!name.empty()) {
        todo.push_back(&find_scenario(name));
    } else {
        std::cerr << "scenario: give a name, --all, or --list\n";
        return 2;
    }

    bool ok = true;
    for (const Scenario* sc : todo) {
        const ScenarioResult res = run_scenario(*sc, ov);
        ok &= res.passed;
        std::cout << (res.passed ? "PASS" : "FAIL") << "  " << sc->name;
        for (size_t i = 0; i < res.diagnostics.size(); ++i) {
            const auto& d = res.diagnostics[i];
            std::cout << "  [" << i << "] " << to_string(d.status)
                      << " max_lat=" << d.max_lat
                      << " h_drift=" << d.h_drift;
        }
        std::cout << "\n";
        for (const auto& o : res.outcomes)
            std::cout << "      " << (o.passed ? "ok  " : "FAIL") << " "
                      << o.assertion.kind << " (measured " << o.measured
                      << ")\n";
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            const auto sys = sc->config.model.build();
            for (size_t i = 0; i < res.trajectories.size(); ++i)
                write_trajectory_csv_file(out_dir + "/" + sc->name + "_traj" +
                                              std::to_string(i) + ".csv",
                                          res.trajectories[i], *sys);
            write_json_file(out_dir + "/" + sc->name + "_report.json",
                            scenario_report_json(*sc, res));
        }
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling-wave resonance laboratory"};
    app.require_subcommand(1);

    ModelFlags mf;
    InitialFlags inf;
    IntegrationFlags itf;
    std::string config_path, out_path;

    auto* sim = app.add_subcommand("simulate",
                                   "Integrate one configuration and write "
                                   "the sampled trajectory as CSV");
    add_model_flags(sim, mf);
    add_initial_flags(sim, inf);
    add_integration_flags(sim, itf);
    sim->add_option("--config", config_path, "JSON configuration file");
    sim->add_option("--out", out_path, "Output directory");

    auto* sce = app.add_subcommand("scenario",
                                   "Run registry scenarios and their checks");
    std::string sc_name;
    bool sc_all = false, sc_list = false;
    sce->add_option("name", sc_name, "Scenario name");
    sce->add_flag("--all", sc_all, "Run every registry scenario");
    sce->add_flag("--list", sc_list, "List registry scenarios");
    sce->add_option("--out", out_path, "Output directory");
    double sc_tend = 0, sc_dt = 0, sc_tol = 0;
    auto* o1 = sce->add_option("--t-end", sc_tend, "Override end time");
    auto* o2 = sce->add_option("--sample-dt", sc_dt, "Override sample spacing");
    auto* o3 = sce->add_option("--tol", sc_tol, "Override relative tolerance");

    auto* swp = app.add_subcommand("sweep", "Run a parameter grid");
    int swp_jobs = -1;
    swp->add_option("--config", config_path, "Sweep specification JSON")
        ->required();
    swp->add_option("--out", out_path, "Output CSV file");
    swp->add_option("--jobs", swp_jobs, "Worker threads (0 = hardware)");

    auto* ana = app.add_subcommand("analyze",
                                   "Report the unperturbed resonance "
                                   "structure of a model");
    add_model_flags(ana, mf);
    ana->add_option("--config", config_path, "JSON configuration file");
    ana->add_option("--out", out_path, "Output JSON file");

    auto* isl = app.add_subcommand("island-width",
                                   "Measure the primary resonance island");
    double isl_c = 0.0, isl_eps = 2.5e-4, isl_horizon = 50.0, isl_rtol = 1e-5;
    int isl_k = 3;
    double isl_beta = 0.0;
    isl->add_option("--c", isl_c, "Wave speed");
    isl->add_option("--eps", isl_eps, "Perturbation amplitude")->required();
    isl->add_option("--k", isl_k, "Wavenumber");
    isl->add_option("--beta", isl_beta, "Pressure-gradient strength");
    isl->add_option("--horizon-periods", isl_horizon,
                    "Classification horizon in pendulum periods");
    isl->add_option("--rel-tol", isl_rtol, "Bisection tolerance");
    isl->add_option("--out", out_path, "Output JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse CLI11's per-error exit codes onto the documented contract:
        // anything other than a clean --help/--version exit is a usage error.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(effective_config(sim, config_path, mf, inf, itf),
                                out_path);
        }
        if (sce->parsed()) {
            ScenarioOverrides ov;
            if (o1->count()) ov.t_end = sc_tend;
            if (o2->count()) ov.sample_dt = sc_dt;
            if (o3->count()) ov.rel_tol = sc_tol;
            return cmd_scenario(sc_name, sc_all, sc_list, out_path, ov);
        }
        if (swp->parsed()) {
            SweepSpec spec = load_sweep_file(config_path);
            if (swp_jobs >= 0) spec.jobs = swp_jobs;
            const auto rows = run_sweep(spec);
            if (out_path.empty())
                write_sweep_csv(std::cout, spec, rows);
            else
                write_sweep_csv_file(out_path, spec, rows);
            bool any_error = false;
            for (const auto& r : rows) any_error |= !r.error.empty();
            return any_error ? 1 : 0;
        }
        if (ana->parsed()) {
            ModelConfig model;
            if (!config_path.empty())
                model = load_config_file(config_path).model;
            if (config_path.empty() || ana->count("--model"))
                model = model_from_flags(mf);
            const ordered_json rep = analyze_model_json(model);
            std::cout << render_analysis_text(rep);
            if (!out_path.empty()) write_json_file(out_path, rep);
            return 0;
        }
        if (isl->parsed()) {
            const AtmosphericSystem sys(
                AtmosphericParams{isl_k, isl_c, isl_eps, isl_beta});
            IslandWidthOptions opt;
            opt.horizon_periods = isl_horizon;
            opt.rel_tol = isl_rtol;
            const IslandMeasurement m = island_width(sys, isl_c, isl_eps, opt);
            std::cout << "eps " << m.eps << "  c " << m.c << "  width "
                      << m.measured_width << "  predicted "
                      << m.predicted_width << "  center " << m.center
                      << "  d_r " << m.d_r << "\n";
            if (!out_path.empty())
                write_json_file(out_path, island_report_json(m));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
