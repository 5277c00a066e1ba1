#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parares/report.hpp"
#include "parares/scenario.hpp"
#include "parares/sweep.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace parares;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::string& log) {
    const std::string cmd =
        std::string(PARARES_BIN) + " " + args + " >" + log + " 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string tmpdir() {
    char templ[] = "/tmp/parares_test_XXXXXX";
    char* d = mkdtemp(templ);
    REQUIRE(d != nullptr);
    return d;
}

}  // namespace

TEST_CASE("config serialization is a fixed point") {
    SimulationConfig cfg;
    cfg.model.kind = "atmospheric";
    cfg.model.atmospheric = {3, 0.029, 2.5e-4, 0.03};
    cfg.initials[0].phi0 = 1e-5;
    cfg.initials[0].v0 = 1e-5;
    cfg.initials[0].u0 = 4.2e-4;
    cfg.integration.t_end = 314.0;
    const std::string once = serialize_config(cfg);
    const std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);
    CHECK(once.find("\"format_version\": 1") != std::string::npos);

    SimulationConfig back = parse_config(once);
    CHECK(back.model.atmospheric.c == cfg.model.atmospheric.c);
    CHECK(back.model.atmospheric.eps == cfg.model.atmospheric.eps);
    CHECK(back.initials[0].u0 == cfg.initials[0].u0);
    CHECK(back.integration.t_end == 314.0);
}

TEST_CASE("mechanical config round trip") {
    SimulationConfig cfg;
    cfg.model.kind = "mechanical";
    cfg.model.mechanical.a1 = 1.25;
    cfg.model.mechanical.a2 = 0.125;
    cfg.model.mechanical.b = 0.5;
    cfg.initials[0].kind = "reduced";
    cfg.initials[0].x0 = 0.1;
    cfg.initials[0].D0 = 1.05;
    SimulationConfig back = parse_config(serialize_config(cfg));
    CHECK(back.model.kind == "mechanical");
    CHECK(back.model.mechanical.a1 == 1.25);
    CHECK(back.model.mechanical.a2 == 0.125);
    CHECK(back.initials[0].kind == "reduced");
    CHECK(back.initials[0].D0 == 1.05);
}

TEST_CASE("unknown keys and versions are rejected") {
    CHECK_THROWS(parse_config("{\"format_version\": 99, \"model\": {}}"));
    CHECK_THROWS(parse_config("not json at all"));
}

TEST_CASE("scenario registry round-trips through JSON") {
    for (const Scenario& sc : scenario_registry()) {
        ordered_json j = to_json(sc);
        Scenario back = scenario_from_json(j);
        CHECK(back.name == sc.name);
        CHECK(back.config.integration.t_end == sc.config.integration.t_end);
        REQUIRE(back.assertions.size() == sc.assertions.size());
        for (size_t i = 0; i < sc.assertions.size(); ++i) {
            CHECK(back.assertions[i].kind == sc.assertions[i].kind);
            CHECK(back.assertions[i].value == sc.assertions[i].value);
        }
        CHECK(to_json(back) == j);
    }
}

TEST_CASE("physical initial conditions reduce at t = 0") {
    SimulationConfig cfg;
    cfg.model.atmospheric = {3, 0.1, 0.0, 0.0};
    cfg.initials[0].phi0 = 0.3;
    cfg.initials[0].u0 = 0.2;
    cfg.initials[0].theta0 = 1.1;
    auto sys = cfg.model.build();
    PhaseState p = cfg.initials[0].to_state(*sys);
    CHECK(p.x == 0.3);
    CHECK(p.theta == 1.1);
    CHECK(p.D == doctest::Approx(1.2948024031050815).epsilon(1e-15));

    cfg.model.kind = "mechanical";
    auto mech = cfg.model.build();
    CHECK_THROWS_AS(cfg.initials[0].to_state(*mech), std::invalid_argument);
}

TEST_CASE("sweep rows are bit-identical to standalone runs") {
    SweepSpec spec;
    spec.base.model.atmospheric = {3, 0.0, 2.5e-4, 0.0};
    spec.base.initials[0].phi0 = 1e-5;
    spec.base.initials[0].v0 = 1e-5;
    spec.base.initials[0].theta0 = 2.2;
    spec.base.initials[0].u0 = 0.5e-11;
    spec.base.integration.t_end = 200.0;
    spec.base.integration.sample_dt = 0.5;
    spec.axes.push_back({"c", {0.1, 0.01, 1e-4}});
    spec.jobs = 3;
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 3);

    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].error.empty());
        CHECK(rows[i].coords[0] == spec.axes[0].values[i]);
        SimulationConfig one = spec.base;
        one.model.atmospheric.c = spec.axes[0].values[i];
        auto sys = one.model.build();
        Trajectory tr = integrate(*sys, one.initials[0].to_state(*sys),
                                  one.integration);
        CHECK(rows[i].h_drift == tr.h_drift);
        CHECK(rows[i].d_drift == tr.d_drift);
        CHECK(rows[i].max_lat == max_latitude(tr));
    }

    // Same grid, serial: identical rows.
    spec.jobs = 1;
    auto rows1 = run_sweep(spec);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].h_drift == rows1[i].h_drift);
        CHECK(rows[i].max_lat == rows1[i].max_lat);
    }
}

TEST_CASE("two-axis sweeps enumerate row-major") {
    SweepSpec spec;
    spec.base.model.atmospheric = {3, 0.0, 1e-4, 0.0};
    spec.base.integration.t_end = 5.0;
    spec.base.integration.sample_dt = 1.0;
    spec.axes.push_back({"c", {0.0, 0.1}});
    spec.axes.push_back({"eps", {1e-4, 2e-4, 3e-4}});
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].coords == std::vector<double>{0.0, 1e-4});
    CHECK(rows[1].coords == std::vector<double>{0.0, 2e-4});
    CHECK(rows[3].coords == std::vector<double>{0.1, 1e-4});
    CHECK(rows[5].coords == std::vector<double>{0.1, 3e-4});
}

TEST_CASE("sweep grid points that fail are reported, not fatal") {
    SweepSpec spec;
    spec.base.model.atmospheric = {3, 0.0, 0.0, 0.0};
    spec.base.integration.t_end = 5.0;
    spec.base.integration.sample_dt = 1.0;
    // c = -0.6 violates the model's parameter domain.
    spec.axes.push_back({"c", {0.0, -0.6}});
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK(!rows[1].error.empty());
}

TEST_CASE("trajectory CSV format") {
    SimulationConfig cfg;
    cfg.model.atmospheric = {3, 0.0, 0.0, 0.0};
    cfg.initials[0].phi0 = 0.2;
    cfg.integration.t_end = 2.0;
    cfg.integration.sample_dt = 1.0;
    auto sys = cfg.model.build();
    Trajectory tr = integrate(*sys, cfg.initials[0].to_state(*sys),
                              cfg.integration);
    std::ostringstream os;
    write_trajectory_csv(os, tr, *sys);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "# format_version 1");
    std::getline(is, line);
    CHECK(line == "t,phi,v,theta_wrapped,theta_unwrapped,D,u,H,H_drift");
    int data_lines = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++data_lines;
    CHECK(data_lines == 3);
}

// ---- subprocess smoke tests ----

TEST_CASE("cli: scenario --list") {
    const std::string dir = tmpdir();
    CHECK(run_cli("scenario --list", dir + "/log") == 0);
    const std::string out = slurp(dir + "/log");
    CHECK(out.find("fig2_0_1") != std::string::npos);
    CHECK(out.find("fig2_0_7") != std::string::npos);
}

TEST_CASE("cli: simulate writes trajectory and config") {
    const std::string dir = tmpdir();
    CHECK(run_cli("simulate --eps 2.5e-4 --u0 -1e-4 --t-end 10 "
                  "--sample-dt 0.5 --out " + dir, dir + "/log") == 0);
    const std::string csv = slurp(dir + "/trajectory.csv");
    CHECK(csv.rfind("# format_version 1\nt,phi,", 0) == 0);
    SimulationConfig cfg = load_config_file(dir + "/config.json");
    CHECK(cfg.model.atmospheric.eps == 2.5e-4);
    CHECK(cfg.initials[0].u0 == -1e-4);
    CHECK(cfg.integration.t_end == 10.0);
}

TEST_CASE("cli: config file merged with explicit flags") {
    const std::string dir = tmpdir();
    SimulationConfig cfg;
    cfg.model.atmospheric = {3, 0.1, 0.0, 0.0};
    cfg.integration.t_end = 5.0;
    cfg.integration.sample_dt = 1.0;
    std::ofstream(dir + "/in.json") << serialize_config(cfg);
    CHECK(run_cli("simulate --config " + dir + "/in.json --c 0.2 --out " + dir,
                  dir + "/log") == 0);
    SimulationConfig merged = load_config_file(dir + "/config.json");
    CHECK(merged.model.atmospheric.c == 0.2);     // flag wins
    CHECK(merged.integration.t_end == 5.0);       // file survives
}

TEST_CASE("cli: simulate reports aborts with exit 1") {
    const std::string dir = tmpdir();
    CHECK(run_cli("simulate --reduced --x0 1.5 --v0 1.0 --D0 0.0 "
                  "--t-end 10 --sample-dt 0.5 --out " + dir, dir + "/log") == 1);
    CHECK(slurp(dir + "/log").find("aborted-domain") != std::string::npos);
}

TEST_CASE("cli: scenario pass and fail exit codes") {
    const std::string dir = tmpdir();
    CHECK(run_cli("scenario fig2_0_2a --out " + dir, dir + "/log") == 0);
    const std::string rep = slurp(dir + "/fig2_0_2a_report.json");
    auto j = ordered_json::parse(rep);
    CHECK(j["format_version"] == 1);
    CHECK(j["passed"] == true);
    CHECK(j["trajectories"][0]["status"] == "completed");

    // Cut short, the near-parabolic run has no time to destabilize, so its
    // lower bound on the latitude excursion must fail.
    CHECK(run_cli("scenario fig2_0_2c --t-end 50", dir + "/log2") == 1);
    CHECK(slurp(dir + "/log2").find("FAIL") != std::string::npos);
}

TEST_CASE("cli: unknown scenario is a usage error") {
    const std::string dir = tmpdir();
    CHECK(run_cli("scenario not_a_scenario", dir + "/log") == 2);
    CHECK(run_cli("bogus-subcommand", dir + "/log2") == 2);
}

TEST_CASE("cli: sweep end to end") {
    const std::string dir = tmpdir();
    SweepSpec spec;
    spec.base.model.atmospheric = {3, 0.0, 2.5e-4, 0.0};
    spec.base.initials[0].theta0 = 2.2;
    spec.base.initials[0].u0 = 0.5e-11;
    spec.base.integration.t_end = 50.0;
    spec.base.integration.sample_dt = 0.5;
    spec.axes.push_back({"c", {0.1, 0.0001}});
    std::ofstream(dir + "/sweep.json") << to_json(spec).dump(2);
    CHECK(run_cli("sweep --config " + dir + "/sweep.json --jobs 2 --out " +
                  dir + "/rows.csv", dir + "/log") == 0);
    const std::string csv = slurp(dir + "/rows.csv");
    CHECK(csv.find("# format_version 1") == 0);
    // Coordinates echo at full %.17g precision, so 0.1 carries 17 digits.
    CHECK(csv.find("\n0.10000000000000001,") != std::string::npos);
    CHECK(csv.find("\n0.0001,") != std::string::npos);
}

TEST_CASE("cli: analyze text and json") {
    const std::string dir = tmpdir();
    CHECK(run_cli("analyze --beta 0.3 --out " + dir + "/a.json",
                  dir + "/log") == 0);
    auto j = ordered_json::parse(slurp(dir + "/a.json"));
    CHECK(j["loci"]["d_p"].get<double>() ==
          doctest::Approx(1.4832396974191326).epsilon(1e-12));
    CHECK(j["parabolic_resonance"]["converged"] == true);
    CHECK(j["structure"]["travelling_wave"] == true);
    const std::string text = slurp(dir + "/log");
    CHECK(text.find("parabolic resonance point") != std::string::npos);

    CHECK(run_cli("analyze --model mechanical --b 0.5 --out " + dir + "/m.json",
                  dir + "/log2") == 0);
    auto m = ordered_json::parse(slurp(dir + "/m.json"));
    CHECK(m["loci"]["d_p"].get<double>() == 1.0);
    CHECK(m["structure"]["natural_mechanical"] == true);
}

TEST_CASE("cli: island-width") {
    const std::string dir = tmpdir();
    CHECK(run_cli("island-width --eps 2.5e-4 --c 0 --out " + dir + "/i.json",
                  dir + "/log") == 0);
    auto j = ordered_json::parse(slurp(dir + "/i.json"));
    const double measured = j["measured_width"].get<double>();
    CHECK(std::abs(measured - 0.12649110640673517) <= 0.02 * 0.1265);
    CHECK(j["format_version"] == 1);
}
