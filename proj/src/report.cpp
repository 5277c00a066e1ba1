#include "parares/report.hpp"

#include "parares/coords.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace parares {

namespace {

void check_version(const ordered_json& j, const char* what) {
    if (!j.contains("format_version"))
        throw std::invalid_argument(std::string(what) +
                                    ": missing format_version");
    if (j.at("format_version").get<int>() != format_version)
        throw std::invalid_argument(std::string(what) +
                                    ": unsupported format_version");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ordered_json model_to_json(const ModelConfig& m) {
    ordered_json j;
    j["kind"] = m.kind;
    if (m.kind == "atmospheric") {
        j["k"] = m.atmospheric.k;
        j["c"] = m.atmospheric.c;
        j["eps"] = m.atmospheric.eps;
        j["beta"] = m.atmospheric.beta;
        j["profile"] = m.profile;
        if (m.profile == "sin2phi_gradient") j["alpha"] = m.alpha;
    } else {
        j["a1"] = m.mechanical.a1;
        j["a2"] = m.mechanical.a2;
        j["a3"] = m.mechanical.a3;
        j["b"] = m.mechanical.b;
        j["c"] = m.mechanical.c;
        j["eps"] = m.mechanical.eps;
        j["k"] = m.mechanical.k;
    }
    return j;
}

ModelConfig model_from_json(const ordered_json& j) {
    ModelConfig m;
    m.kind = j.at("kind").get<std::string>();
    if (m.kind == "atmospheric") {
        m.atmospheric.k = j.at("k").get<int>();
        m.atmospheric.c = j.at("c").get<double>();
        m.atmospheric.eps = j.at("eps").get<double>();
        m.atmospheric.beta = j.value("beta", 0.0);
        m.profile = j.value("profile", std::string("cos_cube"));
        m.alpha = j.value("alpha", 0.0);
    } else if (m.kind == "mechanical") {
        m.mechanical.a1 = j.at("a1").get<double>();
        m.mechanical.a2 = j.at("a2").get<double>();
        m.mechanical.a3 = j.at("a3").get<double>();
        m.mechanical.b = j.at("b").get<double>();
        m.mechanical.c = j.at("c").get<double>();
        m.mechanical.eps = j.at("eps").get<double>();
        m.mechanical.k = j.at("k").get<int>();
    } else {
        throw std::invalid_argument("config: unknown model kind " + m.kind);
    }
    return m;
}

ordered_json initial_to_json(const InitialConfig& ic) {
    ordered_json j;
    j["kind"] = ic.kind;
    if (ic.kind == "physical") {
        j["phi0"] = ic.phi0;
        j["v0"] = ic.v0;
        j["theta0"] = ic.theta0;
        j["u0"] = ic.u0;
    } else {
        j["x0"] = ic.x0;
        j["v0"] = ic.v0;
        j["theta0"] = ic.theta0;
        j["D0"] = ic.D0;
    }
    return j;
}

InitialConfig initial_from_json(const ordered_json& j) {
    InitialConfig ic;
    ic.kind = j.at("kind").get<std::string>();
    ic.v0 = j.at("v0").get<double>();
    ic.theta0 = j.at("theta0").get<double>();
    if (ic.kind == "physical") {
        ic.phi0 = j.at("phi0").get<double>();
        ic.u0 = j.at("u0").get<double>();
    } else if (ic.kind == "reduced") {
        ic.x0 = j.at("x0").get<double>();
        ic.D0 = j.at("D0").get<double>();
    } else {
        throw std::invalid_argument("config: unknown initial kind " + ic.kind);
    }
    return ic;
}

ordered_json integration_to_json(const IntegrationOptions& o) {
    ordered_json j;
    j["rel_tol"] = o.rel_tol;
    j["abs_tol"] = o.abs_tol;
    j["t_end"] = o.t_end;
    j["sample_dt"] = o.sample_dt;
    j["drift_abort"] = o.drift_abort;
    return j;
}

IntegrationOptions integration_from_json(const ordered_json& j) {
    IntegrationOptions o;
    o.rel_tol = j.value("rel_tol", 1e-12);
    o.abs_tol = j.value("abs_tol", 1e-14);
    o.t_end = j.at("t_end").get<double>();
    o.sample_dt = j.at("sample_dt").get<double>();
    o.drift_abort = j.value("drift_abort", 1e-5);
    return o;
}

ordered_json assertion_to_json(const ScenarioAssertion& a) {
    ordered_json j;
    j["kind"] = a.kind;
    j["value"] = a.value;
    j["tol"] = a.tol;
    j["trajectory"] = a.trajectory;
    return j;
}

ScenarioAssertion assertion_from_json(const ordered_json& j) {
    ScenarioAssertion a;
    a.kind = j.at("kind").get<std::string>();
    a.value = j.at("value").get<double>();
    a.tol = j.value("tol", 0.0);
    a.trajectory = j.value("trajectory", 0);
    return a;
}

} // namespace

ordered_json to_json(const SimulationConfig& cfg) {
    ordered_json j;
    j["format_version"] = format_version;
    j["model"] = model_to_json(cfg.model);
    j["initials"] = ordered_json::array();
    for (const auto& ic : cfg.initials) j["initials"].push_back(initial_to_json(ic));
    j["integration"] = integration_to_json(cfg.integration);
    return j;
}

SimulationConfig simulation_config_from_json(const ordered_json& j) {
    check_version(j, "config");
    SimulationConfig cfg;
    cfg.model = model_from_json(j.at("model"));
    cfg.initials.clear();
    if (j.contains("initials")) {
        for (const auto& ij : j.at("initials"))
            cfg.initials.push_back(initial_from_json(ij));
    } else if (j.contains("initial")) {
        cfg.initials.push_back(initial_from_json(j.at("initial")));
    }
    if (cfg.initials.empty())
        throw std::invalid_argument("config: no initial conditions");
    cfg.integration = integration_from_json(j.at("integration"));
    return cfg;
}

std::string serialize_config(const SimulationConfig& cfg) {
    return to_json(cfg).dump(2) + "\n";
}

SimulationConfig parse_config(const std::string& text) {
    return simulation_config_from_json(ordered_json::parse(text));
}

SimulationConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ordered_json to_json(const Scenario& sc) {
    ordered_json j;
    j["format_version"] = format_version;
    j["name"] = sc.name;
    j["title"] = sc.title;
    j["config"] = to_json(sc.config);
    j["assertions"] = ordered_json::array();
    for (const auto& a : sc.assertions)
        j["assertions"].push_back(assertion_to_json(a));
    return j;
}

Scenario scenario_from_json(const ordered_json& j) {
    check_version(j, "scenario");
    Scenario sc;
    sc.name = j.at("name").get<std::string>();
    sc.title = j.value("title", std::string());
    sc.config = simulation_config_from_json(j.at("config"));
    for (const auto& aj : j.value("assertions", ordered_json::array()))
        sc.assertions.push_back(assertion_from_json(aj));
    return sc;
}

ordered_json to_json(const SweepSpec& spec) {
    ordered_json j;
    j["format_version"] = format_version;
    j["base"] = to_json(spec.base);
    j["axes"] = ordered_json::array();
    for (const auto& ax : spec.axes) {
        ordered_json aj;
        aj["param"] = ax.param;
        aj["values"] = ax.values;
        j["axes"].push_back(aj);
    }
    j["measure_island"] = spec.measure_island;
    j["jobs"] = spec.jobs;
    return j;
}

SweepSpec sweep_spec_from_json(const ordered_json& j) {
    check_version(j, "sweep");
    SweepSpec spec;
    spec.base = simulation_config_from_json(j.at("base"));
    for (const auto& aj : j.at("axes")) {
        SweepAxis ax;
        ax.param = aj.at("param").get<std::string>();
        if (aj.contains("values")) {
            ax.values = aj.at("values").get<std::vector<double>>();
        } else {
            // lo/hi/count shorthand, linear or logarithmic
            const double lo = aj.at("lo").get<double>();
            const double hi = aj.at("hi").get<double>();
            const int count = aj.at("count").get<int>();
            const bool log = aj.value("log", false);
            if (count < 1)
                throw std::invalid_argument("sweep axis: count must be >= 1");
            for (int i = 0; i < count; ++i) {
                const double f =
                    count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
                ax.values.push_back(log ? lo * std::pow(hi / lo, f)
                                        : lo + (hi - lo) * f);
            }
        }
        spec.axes.push_back(std::move(ax));
    }
    spec.measure_island = j.value("measure_island", false);
    spec.jobs = j.value("jobs", 0);
    return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sweep file: " + path);
    return sweep_spec_from_json(ordered_json::parse(in));
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr,
                          const SystemDefinition& sys) {
    const bool spherical = sys.name() == "atmospheric";
    const double h_ref =
        tr.samples.empty() ? 0.0 : sys.hamiltonian(tr.samples.front().state);
    const double h_scale = std::max(1.0, std::abs(h_ref));

    os << "# format_version " << format_version << "\n";
    os << "t,phi,v,theta_wrapped,theta_unwrapped,D,u,H,H_drift\n";
    for (const auto& s : tr.samples) {
        double u = std::numeric_limits<double>::quiet_NaN();
        if (spherical) {
            const double cx = std::cos(s.state.x);
            u = 0.5 * (s.state.D / cx - cx);
        }
        const double H = sys.hamiltonian(s.state);
        os << fmt(s.t) << ',' << fmt(s.state.x) << ',' << fmt(s.state.v) << ','
           << fmt(s.state.theta_wrapped()) << ',' << fmt(s.state.theta) << ','
           << fmt(s.state.D) << ',' << fmt(u) << ',' << fmt(H) << ','
           << fmt(std::abs(H - h_ref) / h_scale) << "\n";
    }
}

void write_trajectory_csv_file(const std::string& path, const Trajectory& tr,
                               const SystemDefinition& sys) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trajectory_csv(out, tr, sys);
}

namespace {

ordered_json state_to_json(double t, const PhaseState& p) {
    ordered_json j;
    j["t"] = t;
    j["x"] = p.x;
    j["v"] = p.v;
    j["theta"] = p.theta;
    j["theta_wrapped"] = p.theta_wrapped();
    j["D"] = p.D;
    return j;
}

} // namespace

ordered_json scenario_report_json(const Scenario& sc,
                                  const ScenarioResult& res) {
    ordered_json j;
    j["format_version"] = format_version;
    j["kind"] = "scenario-report";
    j["name"] = res.name;
    j["title"] = sc.title;
    j["config"] = to_json(sc.config);
    j["trajectories"] = ordered_json::array();
    for (size_t i = 0; i < res.trajectories.size(); ++i) {
        const auto& tr = res.trajectories[i];
        const auto& d = res.diagnostics[i];
        ordered_json tj;
        tj["index"] = i;
        tj["status"] = to_string(d.status);
        tj["samples"] = tr.samples.size();
        tj["h_drift"] = d.h_drift;
        tj["d_drift"] = d.d_drift;
        tj["max_latitude"] = d.max_lat;
        ordered_json dw;
        dw["cell_count"] = d.dwell.cell_count;
        dw["cells_visited"] = d.dwell.cells_visited;
        dw["jumps"] = d.dwell.jumps;
        dw["max_dwell"] = d.dwell.max_dwell;
        tj["dwell"] = dw;
        tj["final"] = state_to_json(tr.samples.back().t,
                                    tr.samples.back().state);
        j["trajectories"].push_back(tj);
    }
    j["assertions"] = ordered_json::array();
    for (const auto& out : res.outcomes) {
        ordered_json aj = assertion_to_json(out.assertion);
        aj["measured"] = out.measured;
        aj["passed"] = out.passed;
        j["assertions"].push_back(aj);
    }
    j["all_completed"] = res.all_completed;
    j["passed"] = res.passed;
    return j;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
    os << "# format_version " << format_version << "\n";
    for (const auto& ax : spec.axes) os << ax.param << ',';
    os << "status,h_drift,d_drift,max_latitude,cells_visited,jumps,max_dwell";
    if (spec.measure_island)
        os << ",island_width,island_center,island_predicted";
    os << ",error\n";
    for (const auto& r : rows) {
        for (double cval : r.coords) os << fmt(cval) << ',';
        if (!r.error.empty()) {
            os << "error,nan,nan,nan,0,0,nan";
            if (spec.measure_island) os << ",nan,nan,nan";
            std::string msg = r.error;
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << ',' << msg << "\n";
            continue;
        }
        os << to_string(r.status) << ',' << fmt(r.h_drift) << ','
           << fmt(r.d_drift) << ',' << fmt(r.max_lat) << ','
           << r.cells_visited << ',' << r.jumps << ',' << fmt(r.max_dwell);
        if (spec.measure_island)
            os << ',' << fmt(r.island_width) << ',' << fmt(r.island_center)
               << ',' << fmt(r.island_predicted);
        os << ",\n";
    }
}

void write_sweep_csv_file(const std::string& path, const SweepSpec& spec,
                          const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_sweep_csv(out, spec, rows);
}

namespace {

ordered_json fixed_point_to_json(const FixedPointRecord& r) {
    ordered_json j;
    j["x"] = r.x;
    j["v"] = r.v;
    j["D"] = r.D;
    j["c"] = r.c;
    j["stability"] = to_string(r.stability);
    j["lambda_sq"] = r.lambda_sq;
    j["theta_rate"] = r.theta_rate;
    j["resonant"] = r.resonant;
    j["residual"] = r.residual;
    return j;
}

} // namespace

ordered_json analyze_model_json(const ModelConfig& model) {
    const auto sys = model.build();
    ordered_json j;
    j["format_version"] = format_version;
    j["kind"] = "analysis-report";
    j["model"] = model_to_json(model);

    const ResonanceLoci loci = resonance_loci(*sys);
    ordered_json lj;
    lj["d_p"] = loci.d_p;
    lj["c_p"] = loci.c_p;
    lj["d_r_slope"] = loci.d_r_slope;
    lj["d_r_at_c_p"] = loci.d_r(loci.c_p);
    if (loci.haller_ck)
        lj["haller_ck"] = *loci.haller_ck;
    else
        lj["haller_ck"] = nullptr;
    lj["branch_samples"] = loci.elliptic_branch.size();
    j["loci"] = lj;

    const ParabolicResonancePoint pr = locate_parabolic_resonance(*sys);
    ordered_json pj;
    pj["x"] = pr.x;
    pj["v"] = pr.v;
    pj["D"] = pr.D;
    pj["c"] = pr.c;
    pj["residual"] = pr.residual;
    pj["converged"] = pr.converged;
    pj["iterations"] = pr.iterations;
    pj["gap_to_closed_form"] =
        std::hypot(pr.D - loci.d_p, pr.c - loci.c_p);
    j["parabolic_resonance"] = pj;

    double flat = std::numeric_limits<double>::quiet_NaN();
    try {
        flat = flatness_index(*sys, loci.c_p);
    } catch (const DomainError&) {
        // branch empty; leave nan
    }
    j["flatness_at_c_p"] = flat;
    j["resonance_type"] =
        (std::isfinite(flat) && flat <= 1e-10) ? "flat-parabolic" : "parabolic";

    const StructureReport st = structure_classify(*sys);
    ordered_json sj;
    sj["separable"] = st.separable;
    sj["separable_c_in_xv"] = st.separable_c_in_xv;
    sj["separable_c_in_D"] = st.separable_c_in_D;
    sj["travelling_wave"] = st.travelling_wave;
    sj["natural_mechanical"] = st.natural_mechanical;
    sj["instability_witness"] = st.instability_witness;
    sj["max_grad_xv_dh0_dD"] = st.max_grad_xv_dh0_dD;
    sj["max_grad_xv_dh0_dc"] = st.max_grad_xv_dh0_dc;
    sj["max_d2h0_dDdc"] = st.max_d2h0_dDdc;
    sj["max_mechanical_defect"] = st.max_mechanical_defect;
    j["structure"] = sj;

    j["fixed_point_slices"] = ordered_json::array();
    for (double f : {0.5, 1.0, 1.5}) {
        ordered_json slice;
        slice["D"] = f * loci.d_p;
        slice["c"] = loci.c_p;
        slice["fixed_points"] = ordered_json::array();
        for (const auto& r :
             find_fixed_points(*sys, f * loci.d_p, loci.c_p))
            slice["fixed_points"].push_back(fixed_point_to_json(r));
        j["fixed_point_slices"].push_back(slice);
    }
    return j;
}

std::string render_analysis_text(const ordered_json& r) {
    std::ostringstream os;
    os << "model: " << r.at("model").at("kind").get<std::string>() << "\n";
    const auto& l = r.at("loci");
    os << "resonance loci:\n"
       << "  d_p = " << fmt(l.at("d_p").get<double>())
       << "   c_p = " << fmt(l.at("c_p").get<double>()) << "\n"
       << "  d_r(c) = 1 + " << fmt(l.at("d_r_slope").get<double>())
       << " * c\n";
    if (!l.at("haller_ck").is_null())
        os << "  higher-order branch resonance at c = "
           << fmt(l.at("haller_ck").get<double>()) << "\n";
    const auto& p = r.at("parabolic_resonance");
    os << "parabolic resonance point:\n"
       << "  (x, v, D, c) = (" << fmt(p.at("x").get<double>()) << ", "
       << fmt(p.at("v").get<double>()) << ", " << fmt(p.at("D").get<double>())
       << ", " << fmt(p.at("c").get<double>()) << ")\n"
       << "  residual = " << fmt(p.at("residual").get<double>())
       << "  converged = " << (p.at("converged").get<bool>() ? "yes" : "no")
       << "  gap to closed form = "
       << fmt(p.at("gap_to_closed_form").get<double>()) << "\n";
    os << "flatness index at c_p = "
       << fmt(r.at("flatness_at_c_p").get<double>()) << "  ("
       << r.at("resonance_type").get<std::string>() << ")\n";
    const auto& s = r.at("structure");
    os << "structure:";
    if (s.at("separable").get<bool>()) os << " separable";
    if (s.at("separable_c_in_xv").get<bool>()) os << " (c in xv part)";
    if (s.at("separable_c_in_D").get<bool>()) os << " (c in D part)";
    if (s.at("travelling_wave").get<bool>()) os << " travelling-wave";
    if (s.at("natural_mechanical").get<bool>()) os << " natural-mechanical";
    os << "\n  instability witness = "
       << fmt(s.at("instability_witness").get<double>()) << "\n";
    for (const auto& slice : r.at("fixed_point_slices")) {
        os << "fixed points at D = " << fmt(slice.at("D").get<double>())
           << ", c = " << fmt(slice.at("c").get<double>()) << ":\n";
        for (const auto& fp : slice.at("fixed_points")) {
            os << "  x = " << fmt(fp.at("x").get<double>())
               << "  " << fp.at("stability").get<std::string>()
               << "  lambda^2 = " << fmt(fp.at("lambda_sq").get<double>())
               << "  theta_rate = " << fmt(fp.at("theta_rate").get<double>());
            if (fp.at("resonant").get<bool>()) os << "  [resonant]";
            os << "\n";
        }
    }
    return os.str();
}

ordered_json island_report_json(const IslandMeasurement& m) {
    ordered_json j;
    j["format_version"] = format_version;
    j["kind"] = "island-report";
    j["eps"] = m.eps;
    j["c"] = m.c;
    j["d_r"] = m.d_r;
    j["theta_center"] = m.theta_center;
    j["lower_edge"] = m.lower_edge;
    j["upper_edge"] = m.upper_edge;
    j["measured_width"] = m.measured_width;
    j["predicted_width"] = m.predicted_width;
    j["quoted_width"] = m.quoted_width;
    j["center"] = m.center;
    return j;
}

} // namespace parares
