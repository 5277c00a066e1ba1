#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parares/atmospheric.hpp"
#include "parares/integrate.hpp"
#include "parares/mechanical.hpp"

#include <cmath>
#include <cstring>

using namespace parares;

namespace {

IntegrationOptions opts(double t_end, double dt, double rel = 1e-12,
                        double drift = 1e-5) {
    IntegrationOptions o;
    o.rel_tol = rel;
    o.abs_tol = rel * 1e-2;
    o.t_end = t_end;
    o.sample_dt = dt;
    o.drift_abort = drift;
    return o;
}

double reldiff(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("sample grid is exact multiples plus the endpoint") {
    AtmosphericSystem sys({3, 0.0, 0.0, 0.0});
    Trajectory tr = integrate(sys, {0.1, 0.0, 0.0, 0.9}, opts(10.3, 0.5));
    REQUIRE(tr.status == RunStatus::completed);
    REQUIRE(tr.samples.size() == 22);  // t = 0, 0.5, ..., 10.0, then 10.3
    for (int j = 0; j <= 20; ++j) CHECK(tr.samples[j].t == j * 0.5);
    CHECK(tr.samples.back().t == 10.3);

    Trajectory tr2 = integrate(sys, {0.1, 0.0, 0.0, 0.9}, opts(2.0, 0.5));
    CHECK(tr2.samples.size() == 5);
    CHECK(tr2.samples.back().t == 2.0);
}

TEST_CASE("unperturbed runs conserve H and D") {
    AtmosphericSystem atm({3, 0.05, 0.0, 0.1});
    Trajectory tr = integrate(atm, {0.4, 0.1, 0.2, 0.8}, opts(1000.0, 1.0));
    CHECK(tr.status == RunStatus::completed);
    CHECK(tr.h_drift <= 1e-9);
    CHECK(tr.d_drift <= 1e-9);

    MechanicalParams mp;
    mp.b = 0.5;
    mp.c = 0.1;
    Trajectory tm = integrate(MechanicalSystem(mp), {0.5, 0.2, 0.3, 1.2},
                              opts(1000.0, 1.0));
    CHECK(tm.status == RunStatus::completed);
    CHECK(tm.h_drift <= 1e-9);
    CHECK(tm.d_drift <= 1e-9);
}

TEST_CASE("perturbed runs conserve H but move D") {
    AtmosphericSystem sys({3, 0.0, 2.5e-4, 0.0});
    Trajectory tr = integrate(sys, {1e-5, 1e-5, 0.0, 0.9998}, opts(2000.0, 0.5));
    CHECK(tr.status == RunStatus::completed);
    CHECK(tr.h_drift <= 1e-10);
    CHECK(tr.d_drift >= 1e-4);  // the wave exchanges momentum
}

TEST_CASE("bitwise determinism") {
    AtmosphericSystem sys({3, 0.029, 2.5e-4, 0.03});
    PhaseState p0{1e-5, 1e-5, 0.3, 1.05};
    Trajectory a = integrate(sys, p0, opts(500.0, 0.5));
    Trajectory b = integrate(sys, p0, opts(500.0, 0.5));
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].t == b.samples[i].t);
        CHECK(std::memcmp(&a.samples[i].state, &b.samples[i].state,
                          sizeof(PhaseState)) == 0);
    }
    CHECK(a.h_drift == b.h_drift);
    CHECK(a.d_drift == b.d_drift);
}

TEST_CASE("halving the tolerance does not double the drift") {
    AtmosphericSystem sys({3, 0.1, 0.0, 0.3});
    PhaseState p0{0.6, 0.1, 0.0, 0.7};
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        Trajectory coarse = integrate(sys, p0, opts(100.0, 1.0, tol));
        Trajectory fine = integrate(sys, p0, opts(100.0, 1.0, tol / 2));
        CHECK(fine.h_drift <= 2.0 * coarse.h_drift + 1e-15);
    }
}

TEST_CASE("unperturbed flow is time reversible") {
    // R(x,v,theta,D) = (x,-v,-theta,D) conjugates the eps=0 flow to its
    // inverse; integrating forward, reflecting, and integrating forward again
    // must return to the reflected start.
    auto reflect = [](PhaseState p) {
        return PhaseState{p.x, -p.v, -p.theta, p.D};
    };
    AtmosphericSystem atm({3, 0.07, 0.0, 0.2});
    MechanicalParams mp;
    mp.a2 = 0.3;
    mp.b = 0.4;
    for (const SystemDefinition* sys :
         {static_cast<const SystemDefinition*>(&atm)}) {
        PhaseState p0{0.5, 0.15, 0.8, 0.9};
        Trajectory fwd = integrate(*sys, p0, opts(50.0, 50.0));
        Trajectory back = integrate(*sys, reflect(fwd.final_state()), opts(50.0, 50.0));
        PhaseState ret = reflect(back.final_state());
        CHECK(std::abs(ret.x - p0.x) <= 1e-8);
        CHECK(std::abs(ret.v - p0.v) <= 1e-8);
        CHECK(std::abs(ret.theta - p0.theta) <= 1e-8);
        CHECK(std::abs(ret.D - p0.D) <= 1e-8);
    }
    MechanicalSystem mech(mp);
    PhaseState q0{0.4, -0.2, 1.1, 1.3};
    Trajectory fwd = integrate(mech, q0, opts(50.0, 50.0));
    Trajectory back = integrate(mech, {fwd.final_state().x, -fwd.final_state().v,
                                       -fwd.final_state().theta, fwd.final_state().D},
                                opts(50.0, 50.0));
    CHECK(std::abs(back.final_state().x - q0.x) <= 1e-8);
    CHECK(std::abs(-back.final_state().v - q0.v) <= 1e-8);
}

TEST_CASE("drift abort keeps the offending partial trajectory") {
    AtmosphericSystem sys({3, 0.1, 0.0, 0.3});
    Trajectory tr = integrate(sys, {0.6, 0.1, 0.0, 0.7},
                              opts(200.0, 1.0, 1e-6, 1e-14));
    CHECK(tr.status == RunStatus::aborted_drift);
    CHECK(tr.h_drift > 1e-14);
    CHECK(tr.samples.size() >= 2);
    CHECK(tr.samples.size() < 201);
    CHECK(to_string(tr.status) == "aborted-drift");
}

TEST_CASE("domain abort near the pole") {
    // D = 0 lets a fast particle coast to the pole: w = D/cos x - cos x stays
    // bounded, so nothing in H prevents |x| -> pi/2 and the guard must fire.
    AtmosphericSystem sys({3, 0.0, 0.0, 0.0});
    Trajectory tr = integrate(sys, {1.5, 1.0, 0.0, 0.0}, opts(10.0, 0.01));
    CHECK(tr.status == RunStatus::aborted_domain);
    CHECK(!tr.samples.empty());
    CHECK(tr.final_state().x < half_pi);
    CHECK(tr.final_state().x >= 1.5);
    CHECK(to_string(tr.status) == "aborted-domain");
}

TEST_CASE("theta accumulates without wrapping") {
    AtmosphericSystem sys({3, 0.0, 0.0, 0.0});
    // Off-resonance rotation: dtheta/dt = (D-1)/4 = 0.075 on the cylinder.
    Trajectory tr = integrate(sys, {0.0, 0.0, 0.0, 1.3}, opts(200.0, 1.0));
    CHECK(tr.final_state().theta ==
          doctest::Approx(0.075 * 200).epsilon(1e-10));
    CHECK(tr.final_state().theta > two_pi);
    CHECK(tr.final_state().theta_wrapped() >= 0.0);
    CHECK(tr.final_state().theta_wrapped() < two_pi);
}

TEST_CASE("conservation report windows") {
    AtmosphericSystem sys({3, 0.05, 0.0, 0.1});
    Trajectory tr = integrate(sys, {0.4, 0.1, 0.2, 0.8}, opts(150.0, 1.0));
    ConservationReport rep = conservation_report(tr, sys);
    CHECK(rep.h_drift == tr.h_drift);
    CHECK(rep.d_drift == tr.d_drift);
    REQUIRE(rep.windows.size() == 4);  // [0,1], (1,10], (10,100], (100,150]
    CHECK(rep.windows[0].t_to == 1.0);
    CHECK(rep.windows[1].t_to == 10.0);
    CHECK(rep.windows[2].t_to == 100.0);
    CHECK(rep.windows[3].t_to == 150.0);
    double worst = 0.0;
    for (const auto& w : rep.windows) worst = std::max(worst, w.h_drift);
    CHECK(worst == tr.h_drift);
}

TEST_CASE("input validation") {
    AtmosphericSystem sys({3, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(integrate(sys, {0.0, 0.0, 0.0, 1.0}, opts(-1.0, 0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(sys, {0.0, 0.0, 0.0, 1.0}, opts(10.0, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(sys, {half_pi, 0.0, 0.0, 1.0}, opts(10.0, 0.5)),
                    DomainError);
}

TEST_CASE("relative drift uses a unit floor") {
    // Start at H very close to 0; drift must be measured against
    // max(1, |H(0)|), not against the tiny |H(0)|.
    AtmosphericSystem sys({3, 0.0, 2.5e-4, 0.0});
    Trajectory tr = integrate(sys, {1e-5, 1e-5, 0.0, 0.9998}, opts(100.0, 1.0));
    const double h0 = sys.hamiltonian(tr.initial());
    CHECK(std::abs(h0) < 1e-6);
    double worst = 0.0;
    for (const auto& s : tr.samples)
        worst = std::max(worst, reldiff(sys.hamiltonian(s.state), h0));
    CHECK(tr.h_drift == doctest::Approx(worst).epsilon(1e-12));
    CHECK(tr.h_drift <= 1e-12);
}
