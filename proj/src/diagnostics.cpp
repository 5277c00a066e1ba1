#include "parares/diagnostics.hpp"

#include "parares/atmospheric.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace parares {

double max_latitude(const Trajectory& tr) {
    if (tr.samples.empty())
        throw std::invalid_argument("max_latitude: empty trajectory");
    double m = 0.0;
    for (const auto& s : tr.samples) m = std::max(m, std::abs(s.state.x));
    return m;
}

namespace {

long zonal(long cell, long n) { return ((cell % n) + n) % n; }

} // namespace

DwellReport dwell_times(const Trajectory& tr, int k) {
    if (k == 0) throw std::invalid_argument("dwell_times: k must be nonzero");
    if (tr.samples.empty())
        throw std::invalid_argument("dwell_times: empty trajectory");

    const long n = 2L * std::abs(k);
    const double w = pi / std::abs(k);        // cell width in theta
    const double b0 = 0.25 * w;               // first wall: pi/(4k)
    auto cell_of = [&](double theta) {
        return static_cast<long>(std::floor((theta - b0) / w));
    };
    auto wall = [&](long m) { return b0 + static_cast<double>(m) * w; };

    DwellReport rep;
    rep.cell_count = static_cast<int>(n);

    long cur = cell_of(tr.samples.front().state.theta);
    double enter = tr.samples.front().t;

    for (size_t i = 1; i < tr.samples.size(); ++i) {
        const double t0 = tr.samples[i - 1].t, t1 = tr.samples[i].t;
        const double th0 = tr.samples[i - 1].state.theta;
        const double th1 = tr.samples[i].state.theta;
        const long ci = cell_of(th1);
        if (ci == cur) continue;

        auto cross_time = [&](double thb) {
            return th1 == th0 ? t1 : t0 + (t1 - t0) * (thb - th0) / (th1 - th0);
        };
        if (ci > cur) {
            for (long m = cur + 1; m <= ci; ++m) {
                const double tc = cross_time(wall(m));
                rep.visits.push_back({zonal(cur, n), enter, tc});
                enter = tc;
                cur = m;
            }
        } else {
            for (long m = cur; m > ci; --m) {
                const double tc = cross_time(wall(m));
                rep.visits.push_back({zonal(cur, n), enter, tc});
                enter = tc;
                cur = m - 1;
            }
        }
    }
    rep.visits.push_back({zonal(cur, n), enter, tr.samples.back().t});

    rep.jumps = static_cast<long>(rep.visits.size()) - 1;
    std::set<long> seen;
    for (const auto& v : rep.visits) {
        seen.insert(v.cell);
        rep.max_dwell = std::max(rep.max_dwell, v.dwell());
    }
    rep.cells_visited = static_cast<int>(seen.size());
    return rep;
}

namespace {

enum class Motion { librational, rotational };

// Classify the on-cylinder motion started at (theta_c, d0): librational
// orbits recross the resonant action d_r, rotational ones run off in
// theta by more than a full cell before that can happen.
Motion classify_probe(const SystemDefinition& sys, double theta_c, double d0,
                      double d_r, double period, double horizon,
                      const IntegrationOptions& base) {
    const double cell = pi / std::abs(sys.wavenumber());
    const double s0 = d0 > d_r ? 1.0 : -1.0;

    IntegrationOptions opts = base;
    opts.t_end = 2.0 * period;
    opts.sample_dt = period / 64.0;

    PhaseState state{0.0, 0.0, theta_c, d0};
    double elapsed = 0.0;
    while (elapsed < horizon) {
        const Trajectory tr = integrate(sys, state, opts);
        if (tr.status != RunStatus::completed)
            throw std::runtime_error("island_width: on-cylinder probe aborted");
        for (size_t i = 1; i < tr.samples.size(); ++i) {
            const auto& s = tr.samples[i].state;
            if (std::abs(s.theta - theta_c) > cell) return Motion::rotational;
            if ((s.D - d_r) * s0 < 0.0) return Motion::librational;
        }
        state = tr.final_state();
        elapsed += opts.t_end;
    }
    // Horizon exhausted: the probe hugs the separatrix; count it as
    // trapped, which biases both edges outward by less than the
    // bisection tolerance.
    return Motion::librational;
}

} // namespace

IslandMeasurement island_width(const SystemDefinition& sys, double c,
                               double eps, const IslandWidthOptions& opt) {
    const auto* atm = dynamic_cast<const AtmosphericSystem*>(&sys);
    if (!atm)
        throw std::invalid_argument("island_width: atmospheric systems only");
    if (!(eps > 0.0))
        throw DomainError("island_width: eps must be positive");

    AtmosphericParams pp = atm->params();
    pp.c = c;
    pp.eps = eps;
    const AtmosphericSystem probe_sys(pp, atm->pressure_profile_ptr());

    const double ka = std::abs(pp.k);
    const double a0 = 1.0;  // wave amplitude at the equator
    const double d_r = 1.0 + 2.0 * c;
    const double theta_c = 3.0 * pi / (4.0 * ka);  // stable phase
    const double half = 4.0 * std::sqrt(eps * a0);
    const double period = two_pi / (ka * std::sqrt(eps * a0));
    const double horizon = opt.horizon_periods * period;

    auto classify = [&](double d0) {
        return classify_probe(probe_sys, theta_c, d0, d_r, period, horizon,
                              opt.integration);
    };

    auto edge = [&](double sgn) {
        double lo = d_r + sgn * 0.2 * half;   // well inside the island
        double hi = d_r + sgn * 2.0 * half;   // well outside
        if (classify(lo) != Motion::librational)
            throw std::runtime_error("island_width: inner probe not trapped");
        if (classify(hi) != Motion::rotational)
            throw std::runtime_error("island_width: outer probe not passing");
        for (int i = 0; i < 80 && std::abs(hi - lo) > opt.rel_tol * half; ++i) {
            const double mid = 0.5 * (lo + hi);
            (classify(mid) == Motion::librational ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    IslandMeasurement m;
    m.eps = eps;
    m.c = c;
    m.d_r = d_r;
    m.theta_center = theta_c;
    m.upper_edge = edge(+1.0);
    m.lower_edge = edge(-1.0);
    m.measured_width = m.upper_edge - m.lower_edge;
    m.predicted_width = 8.0 * std::sqrt(eps * a0);
    m.quoted_width = std::sqrt(8.0 * eps * a0);
    m.center = 0.5 * (m.upper_edge + m.lower_edge);
    return m;
}

} // namespace parares
