#include "parares/analysis.hpp"

#include "parares/atmospheric.hpp"
#include "parares/mechanical.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace parares {

const char* to_string(Stability s) {
    switch (s) {
        case Stability::elliptic: return "elliptic";
        case Stability::hyperbolic: return "hyperbolic";
        case Stability::parabolic: return "parabolic";
    }
    return "unknown";
}

namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using Eigen::Vector4d;

FixedPointRecord make_record(const SystemDefinition& sys, double x, double v,
                             double D, double c,
                             const AnalysisTolerances& tol) {
    const PhaseState p{x, v, 0.0, D};
    FixedPointRecord r;
    r.x = x;
    r.v = v;
    r.D = D;
    r.c = c;
    r.residual = sys.grad_xv_h0(p).norm();
    const double det = sys.hessian_xv_h0(p).determinant();
    if (det > tol.parabolic_det)
        r.stability = Stability::elliptic;
    else if (det < -tol.parabolic_det)
        r.stability = Stability::hyperbolic;
    else
        r.stability = Stability::parabolic;
    // For a canonical 2x2 block (unit v-mass, no xv-coupling after
    // symmetrization) the linearized growth rates satisfy lambda^2 = -det.
    r.lambda_sq = -det;
    r.theta_rate = sys.dh0_dD(p);
    r.resonant = std::abs(r.theta_rate) <= tol.resonant_rate;
    return r;
}

// Damped Newton for grad_xv H0 = 0 at frozen (D, c). Near parabolic
// degeneracies the Hessian is singular at the root, so fall back to
// least-squares steps and rely on the step-size stop (the residual
// converges much faster than the iterate there).
struct NewtonResult {
    double x, v, residual;
};

std::optional<NewtonResult> newton_xv(const SystemDefinition& sys, double x0,
                                      double v0, double D) {
    const double bound = sys.chart_half_width() + 0.6;
    double x = x0, v = v0;
    for (int iter = 0; iter < 200; ++iter) {
        PhaseState p{x, v, 0.0, D};
        Vector2d g;
        Matrix2d h;
        try {
            g = sys.grad_xv_h0(p);
            h = sys.hessian_xv_h0(p);
        } catch (const DomainError&) {
            return std::nullopt;
        }
        if (!g.allFinite() || !h.allFinite()) return std::nullopt;

        Vector2d step;
        const double det = h.determinant();
        const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-30);
        if (std::abs(det) > 1e-13 * scale * scale) {
            step = -h.inverse() * g;
        } else {
            step = h.completeOrthogonalDecomposition().solve(-g);
        }
        const double len = step.cwiseAbs().maxCoeff();
        if (len > 0.5) step *= 0.5 / len;
        x += step[0];
        v += step[1];
        if (std::abs(x) > bound || std::abs(v) > 10.0) return std::nullopt;
        if (step.cwiseAbs().maxCoeff() <=
            1e-14 * std::max({1.0, std::abs(x), std::abs(v)}))
            break;
    }
    try {
        const double res = sys.grad_xv_h0({x, v, 0.0, D}).norm();
        return NewtonResult{x, v, res};
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

const AtmosphericSystem* as_atmospheric(const SystemDefinition& sys) {
    return dynamic_cast<const AtmosphericSystem*>(&sys);
}

const MechanicalSystem* as_mechanical(const SystemDefinition& sys) {
    return dynamic_cast<const MechanicalSystem*>(&sys);
}

} // namespace

std::vector<FixedPointRecord> find_fixed_points(const SystemDefinition& sys,
                                                double D, double c,
                                                const AnalysisTolerances& tol) {
    const auto sz = sys.with_wave_speed(c);
    const double W = sz->chart_half_width();

    std::vector<NewtonResult> roots;
    for (int i = 0; i < 21; ++i) {
        const double x0 = -W + 2.0 * W * i / 20.0;
        for (int j = 0; j < 5; ++j) {
            const double v0 = -0.5 + 0.25 * j;
            auto r = newton_xv(*sz, x0, v0, D);
            if (!r || r->residual > tol.residual) continue;
            bool merged = false;
            for (auto& known : roots) {
                if (std::hypot(known.x - r->x, known.v - r->v) < tol.merge) {
                    if (r->residual < known.residual) known = *r;
                    merged = true;
                    break;
                }
            }
            if (!merged) roots.push_back(*r);
        }
    }

    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        return a.x != b.x ? a.x < b.x : a.v < b.v;
    });

    std::vector<FixedPointRecord> out;
    out.reserve(roots.size());
    for (const auto& r : roots)
        out.push_back(make_record(*sz, r.x, r.v, D, c, tol));
    return out;
}

FixedPointRecord classify_fixed_point(const SystemDefinition& sys, double x,
                                      double v, double D, double c,
                                      const AnalysisTolerances& tol) {
    const auto sz = sys.with_wave_speed(c);
    const double res = sz->grad_xv_h0({x, v, 0.0, D}).norm();
    if (res > 1e-8)
        throw std::invalid_argument(
            "classify_fixed_point: (x, v) is not a fixed point at this (D, c)");
    return make_record(*sz, x, v, D, c, tol);
}

double elliptic_branch(const SystemDefinition& sys, double x) {
    if (const auto* atm = as_atmospheric(sys)) {
        if (!(std::abs(x) > 0.0) || !(std::abs(x) < half_pi - pole_margin))
            throw DomainError("elliptic_branch: x outside (0, pi/2)");
        const double s2 = std::sin(2.0 * x);
        const double radicand =
            1.0 - 8.0 * atm->pressure_profile().slope(x) / s2;
        if (radicand < 0.0)
            throw DomainError("elliptic_branch: negative radicand, no branch");
        const double cx = std::cos(x);
        const double dg = cx * cx * std::sqrt(radicand);
        if (sys.hessian_xv_h0({x, 0.0, 0.0, dg}).determinant() < -1e-10)
            throw DomainError("elliptic_branch: branch not elliptic here");
        return dg;
    }
    if (const auto* mec = as_mechanical(sys)) {
        const auto& q = mec->params();
        if (q.a1 == 0.0)
            throw DomainError("elliptic_branch: a1 = 0 has no branch");
        if (x == 0.0)
            throw DomainError("elliptic_branch: x must be nonzero");
        const double dg = 1.0 + (q.a2 * x + q.a3 * x * x) / q.a1;
        if (sys.hessian_xv_h0({x, 0.0, 0.0, dg}).determinant() < -1e-10)
            throw DomainError("elliptic_branch: branch not elliptic here");
        return dg;
    }
    throw std::invalid_argument("elliptic_branch: unsupported system");
}

double theta_rate_on_branch(const SystemDefinition& sys, double x, double c) {
    const auto sz = sys.with_wave_speed(c);
    const double dg = elliptic_branch(*sz, x);
    return sz->dh0_dD({x, 0.0, 0.0, dg});
}

ResonanceLoci resonance_loci(const SystemDefinition& sys) {
    ResonanceLoci loci;
    double branch_min = 0.01, branch_max;
    if (const auto* atm = as_atmospheric(sys)) {
        const double bpp0 = atm->pressure_profile().curvature(0.0);
        const double rad = 1.0 - 4.0 * bpp0;
        if (rad < 0.0)
            throw DomainError("resonance_loci: no parabolic circle");
        loci.d_p = std::sqrt(rad);
        loci.c_p = 0.5 * (loci.d_p - 1.0);
        loci.d_r_slope = 2.0;
        loci.d_r = [](double c) { return 1.0 + 2.0 * c; };
        const int k = atm->wavenumber();
        if (atm->pressure_profile().identically_zero() && std::abs(k) >= 3) {
            const double s = std::sin(pi / (4.0 * std::abs(k)));
            loci.haller_ck = -s * s;
        }
        branch_max = sys.chart_half_width();
    } else if (const auto* mec = as_mechanical(sys)) {
        const double s = mec->params().s();
        loci.d_p = 1.0;
        loci.c_p = 0.0;
        loci.d_r_slope = 1.0 / s;
        loci.d_r = [s](double c) { return 1.0 + c / s; };
        branch_max = sys.chart_half_width();
    } else {
        throw std::invalid_argument("resonance_loci: unsupported system");
    }

    for (int i = 0; i < 200; ++i) {
        const double x = branch_min + (branch_max - branch_min) * i / 199.0;
        try {
            loci.elliptic_branch.emplace_back(x, elliptic_branch(sys, x));
        } catch (const DomainError&) {
            // branch undefined here; skip
        }
    }
    return loci;
}

namespace {

// Residual of the parabolic-resonance system at q = (x, v, D, c):
// (grad_xv H0, det Hessian, dH0/dD). The base system's own c is ignored.
Vector4d pr_residual(const SystemDefinition& base, const Vector4d& q) {
    const auto sys = base.with_wave_speed(q[3]);
    const PhaseState p{q[0], q[1], 0.0, q[2]};
    const Vector2d g = sys->grad_xv_h0(p);
    return {g[0], g[1], sys->hessian_xv_h0(p).determinant(), sys->dh0_dD(p)};
}

Vector4d clamp_pr(const SystemDefinition& base, Vector4d q) {
    const double W = base.chart_half_width();
    q[0] = std::clamp(q[0], -W, W);
    q[1] = std::clamp(q[1], -4.0, 4.0);
    q[2] = std::clamp(q[2], -4.0, 4.0);
    q[3] = std::clamp(q[3], -0.49, 4.0);  // stay inside every model's c-range
    return q;
}

// Damped Gauss-Newton on the masked coordinates of q (mask[i] false
// freezes coordinate i). Least-squares steps via complete orthogonal
// decomposition; Armijo backtracking on the squared residual norm.
struct GnResult {
    Vector4d q;
    double residual;
    int iterations;
};

GnResult gauss_newton_pr(const SystemDefinition& base, Vector4d q,
                         const std::array<bool, 4>& free_coord, int max_iter) {
    int nfree = 0;
    for (bool f : free_coord) nfree += f ? 1 : 0;

    q = clamp_pr(base, q);
    Vector4d r = pr_residual(base, q);
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        if (r.cwiseAbs().maxCoeff() <= 1e-13) break;

        Eigen::MatrixXd jac(4, nfree);
        int col = 0;
        for (int i = 0; i < 4; ++i) {
            if (!free_coord[i]) continue;
            const double h = 1e-7 * std::max(1.0, std::abs(q[i]));
            Vector4d qp = q, qm = q;
            qp[i] += h;
            qm[i] -= h;
            jac.col(col++) =
                (pr_residual(base, clamp_pr(base, qp))
                 - pr_residual(base, clamp_pr(base, qm))) / (2.0 * h);
        }

        Eigen::VectorXd step =
            jac.completeOrthogonalDecomposition().solve(-r);
        if (!step.allFinite()) break;

        const double f0 = r.squaredNorm();
        bool improved = false;
        for (double alpha = 1.0; alpha >= 1e-4; alpha *= 0.5) {
            Vector4d qt = q;
            int c2 = 0;
            for (int i = 0; i < 4; ++i)
                if (free_coord[i]) qt[i] += alpha * step[c2++];
            qt = clamp_pr(base, qt);
            Vector4d rt;
            try {
                rt = pr_residual(base, qt);
            } catch (const DomainError&) {
                continue;
            }
            if (rt.squaredNorm() < f0) {
                q = qt;
                r = rt;
                improved = true;
                break;
            }
        }
        if (!improved) break;  // stalled; caller compares residuals
    }
    return {q, r.cwiseAbs().maxCoeff(), iter};
}

} // namespace

ParabolicResonancePoint locate_parabolic_resonance(const SystemDefinition& sys) {
    const double W = sys.chart_half_width();
    const std::array<Vector4d, 8> seeds = {
        Vector4d{0.3 * W, 0.1, 1.2, 0.1},
        Vector4d{-0.2 * W, -0.15, 0.8, -0.1},
        Vector4d{0.5 * W, 0.25, 1.5, 0.4},
        Vector4d{0.1 * W, -0.05, 1.05, 0.02},
        Vector4d{-0.4 * W, 0.2, 0.6, -0.3},
        Vector4d{0.05 * W, 0.01, 1.4, 0.25},
        Vector4d{0.0, 0.0, 0.9, 0.0},
        Vector4d{0.2 * W, 0.0, 1.1, 0.05},
    };

    const std::array<bool, 4> all_free{true, true, true, true};
    GnResult best{seeds[0], std::numeric_limits<double>::infinity(), 0};
    for (const auto& s : seeds) {
        GnResult g = gauss_newton_pr(sys, s, all_free, 200);
        if (g.residual < best.residual) best = g;
    }

    // Symmetry-snap refinement: the full Jacobian is rank-deficient at the
    // degenerate root, which stalls the iterate (not the residual) at
    // ~1e-7 in x. Try the symmetric candidates; keep a snap only when it
    // reaches at least the unsnapped residual, preferring the most
    // symmetric admissible point.
    struct Candidate {
        std::array<bool, 4> free_coord;
        Vector4d start;
    };
    const std::array<Candidate, 3> candidates = {
        Candidate{{false, false, true, true},
                  Vector4d{0.0, 0.0, best.q[2], best.q[3]}},
        Candidate{{true, false, true, true},
                  Vector4d{best.q[0], 0.0, best.q[2], best.q[3]}},
        Candidate{all_free, best.q},
    };

    GnResult refined[3];
    double min_res = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        refined[i] = gauss_newton_pr(sys, candidates[i].start,
                                     candidates[i].free_coord, 80);
        refined[i].iterations += best.iterations;
        min_res = std::min(min_res, refined[i].residual);
    }
    const double acceptable = std::max(2.0 * min_res, 1e-12);
    GnResult chosen = refined[2];
    for (int i = 0; i < 3; ++i) {
        if (refined[i].residual <= acceptable) {
            chosen = refined[i];
            break;
        }
    }

    ParabolicResonancePoint out;
    out.x = chosen.q[0];
    out.v = chosen.q[1];
    out.D = chosen.q[2];
    out.c = chosen.q[3];
    out.residual = chosen.residual;
    out.converged = chosen.residual <= 1e-10;
    out.iterations = chosen.iterations;
    return out;
}

double flatness_index(const SystemDefinition& sys, double c) {
    const double W = sys.chart_half_width();
    double worst = 0.0;
    int valid = 0;
    for (int side = -1; side <= 1; side += 2) {
        for (int i = 0; i < 200; ++i) {
            const double x = side * (0.01 + (W - 0.01) * i / 199.0);
            try {
                worst = std::max(worst,
                                 std::abs(theta_rate_on_branch(sys, x, c)));
                ++valid;
            } catch (const DomainError&) {
                // outside the branch domain
            }
        }
    }
    if (valid == 0)
        throw DomainError("flatness_index: elliptic branch is empty");
    return worst;
}

namespace {

double witness_at(const SystemDefinition& sys, const PhaseState& p) {
    const double h = 1e-5;
    auto grad_of = [&](auto&& f) {
        PhaseState xp = p, xm = p, vp = p, vm = p;
        xp.x += h;
        xm.x -= h;
        vp.v += h;
        vm.v -= h;
        const double gx = (f(xp) - f(xm)) / (2.0 * h);
        const double gv = (f(vp) - f(vm)) / (2.0 * h);
        return std::hypot(gx, gv);
    };
    return grad_of([&](const PhaseState& s) { return sys.dh0_dD(s); })
         + grad_of([&](const PhaseState& s) { return sys.dh0_dc(s); });
}

} // namespace

StructureReport structure_classify(const SystemDefinition& sys) {
    StructureReport rep;
    const double thr = 1e-8;
    const double h = 1e-5;
    const double xbox = std::min(1.2, sys.chart_half_width() - 2.0 * h);

    std::mt19937_64 rng(0x70a0f1e5u);
    std::uniform_real_distribution<double> ux(-xbox, xbox), uv(-1.0, 1.0),
        ud(0.2, 1.8);

    for (int i = 0; i < 200; ++i) {
        const PhaseState p{ux(rng), uv(rng), 0.0, ud(rng)};

        auto fd_xv = [&](auto&& f) {
            PhaseState xp = p, xm = p, vp = p, vm = p;
            xp.x += h;
            xm.x -= h;
            vp.v += h;
            vm.v -= h;
            return std::max(std::abs((f(xp) - f(xm)) / (2.0 * h)),
                            std::abs((f(vp) - f(vm)) / (2.0 * h)));
        };
        rep.max_grad_xv_dh0_dD = std::max(
            rep.max_grad_xv_dh0_dD,
            fd_xv([&](const PhaseState& s) { return sys.dh0_dD(s); }));
        rep.max_grad_xv_dh0_dc = std::max(
            rep.max_grad_xv_dh0_dc,
            fd_xv([&](const PhaseState& s) { return sys.dh0_dc(s); }));

        PhaseState dp = p, dm = p;
        dp.D += h;
        dm.D -= h;
        rep.max_d2h0_dDdc = std::max(
            rep.max_d2h0_dDdc,
            std::abs((sys.dh0_dc(dp) - sys.dh0_dc(dm)) / (2.0 * h)));

        PhaseState pv0 = p;
        pv0.v = 0.0;
        rep.max_mechanical_defect = std::max(
            rep.max_mechanical_defect,
            std::abs(sys.unperturbed_hamiltonian(p)
                     - sys.unperturbed_hamiltonian(pv0)
                     - 0.5 * p.v * p.v));
    }

    rep.separable = rep.max_grad_xv_dh0_dD <= thr;
    rep.separable_c_in_xv = rep.separable && rep.max_d2h0_dDdc <= thr;
    rep.separable_c_in_D = rep.separable && rep.max_grad_xv_dh0_dc <= thr;
    rep.travelling_wave =
        rep.max_grad_xv_dh0_dc <= thr && rep.max_grad_xv_dh0_dD > thr;
    rep.natural_mechanical = rep.max_mechanical_defect <= thr;

    rep.q_pr = locate_parabolic_resonance(sys);
    const auto near = sys.with_wave_speed(rep.q_pr.c);
    std::mt19937_64 rng2(0x9e3779b9u);
    std::uniform_real_distribution<double> box(-0.5, 0.5);
    const double W = sys.chart_half_width() - 2.0 * h;
    for (int i = 0; i < 200; ++i) {
        PhaseState p{std::clamp(rep.q_pr.x + box(rng2), -W, W),
                     rep.q_pr.v + box(rng2), 0.0, rep.q_pr.D + box(rng2)};
        rep.instability_witness =
            std::max(rep.instability_witness, witness_at(*near, p));
    }
    return rep;
}

} // namespace parares
