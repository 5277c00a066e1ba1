#pragma once

#include "parares/system.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace parares {

enum class Stability { elliptic, hyperbolic, parabolic };

const char* to_string(Stability s);

/// A fixed point of the (x, v) subsystem at frozen (D, c). It carries the
/// classification data of the full circle of fixed points it generates:
/// theta_rate is the angular speed of the circle (zero on a resonant
/// circle), lambda_sq the squared normal growth rate.
struct FixedPointRecord {
    double x = 0.0, v = 0.0;
    double D = 0.0, c = 0.0;
    Stability stability = Stability::elliptic;
    double lambda_sq = 0.0;   // -det of the (x,v) Hessian of H0
    double theta_rate = 0.0;  // dH0/dD on the circle
    bool resonant = false;    // |theta_rate| below tolerance
    double residual = 0.0;    // ||grad_xv H0|| at the point
};

struct AnalysisTolerances {
    double parabolic_det = 1e-8;   // |det| below this counts as parabolic
    double residual = 1e-10;       // accepted root residual
    double merge = 1e-6;           // distance below which roots coincide
    double resonant_rate = 1e-8;   // |theta_rate| below this is resonant
};

/// All fixed points of the (x, v) subsystem at the slice (D, c), found by
/// damped Newton iteration from a deterministic 21 x 5 seed grid over
/// x in [-chart_half_width, chart_half_width], v in [-1/2, 1/2]. Results
/// are deduplicated, classified, and sorted by x (then v). eps plays no
/// role: the analysis is of the unperturbed structure.
std::vector<FixedPointRecord> find_fixed_points(
    const SystemDefinition& sys, double D, double c,
    const AnalysisTolerances& tol = {});

/// Classification of a claimed fixed point. Throws std::invalid_argument
/// if (x, v) is not actually a root of grad_xv H0 at (D, c) to within
/// 1e-8.
FixedPointRecord classify_fixed_point(const SystemDefinition& sys, double x,
                                      double v, double D, double c,
                                      const AnalysisTolerances& tol = {});

/// Closed-form resonance geometry of a model family.
struct ResonanceLoci {
    double d_p = 0.0;  // parabolic circle action
    double c_p = 0.0;  // wave speed at which the resonance is parabolic
    std::function<double(double)> d_r;  // resonant action as a function of c
    double d_r_slope = 0.0;             // d d_r / dc (the loci are affine)
    /// Sampled elliptic branch (x, D_g(x)) where defined.
    std::vector<std::pair<double, double>> elliptic_branch;
    /// Wave speed of the strongest higher-order branch resonance, when the
    /// pressure profile vanishes identically and |k| >= 3.
    std::optional<double> haller_ck;
};

/// Closed forms for the two bundled model families; throws
/// std::invalid_argument for other systems.
ResonanceLoci resonance_loci(const SystemDefinition& sys);

/// Action D_g(x) on the nontrivial (elliptic) branch of fixed points
/// through latitude/displacement x != 0. Throws DomainError where the
/// branch does not exist (negative radicand, or no branch at all).
double elliptic_branch(const SystemDefinition& sys, double x);

/// Angular rate dtheta/dt on the elliptic branch point at x, with wave
/// speed c. The resonance structure of the branch is read off its zeros.
double theta_rate_on_branch(const SystemDefinition& sys, double x, double c);

struct ParabolicResonancePoint {
    double x = 0.0, v = 0.0, D = 0.0, c = 0.0;
    double residual = 0.0;  // max-norm of the 4-component defining system
    bool converged = false;
    int iterations = 0;
};

/// Locates a parabolic resonance (grad_xv H0 = 0, det Hessian = 0,
/// dH0/dD = 0) by damped Gauss-Newton with least-squares steps from a
/// deterministic seed list, followed by a symmetry-snap refinement. The
/// Jacobian is singular at the solution (pitchfork degeneracy), hence
/// least-squares steps and generous iteration caps.
ParabolicResonancePoint locate_parabolic_resonance(const SystemDefinition& sys);

/// Max |dtheta/dt| over the elliptic branch at wave speed c, sampled on a
/// 200-point grid intersected with the branch domain. Zero (to roundoff)
/// means every branch circle is resonant simultaneously: the flat case.
/// Throws DomainError if the branch is empty.
double flatness_index(const SystemDefinition& sys, double c);

/// Structural classification of H0 by numerically testing the defining
/// identities on pseudo-random states (fixed seed, 200 states, central
/// differences, identity threshold 1e-8).
struct StructureReport {
    bool separable = false;            // grad_xv dH0/dD == 0
    bool separable_c_in_xv = false;    // separable and d2H0/dDdc == 0
    bool separable_c_in_D = false;     // separable and grad_xv dH0/dc == 0
    bool travelling_wave = false;      // grad_xv dH0/dc == 0, grad_xv dH0/dD != 0
    bool natural_mechanical = false;   // H0 = v^2/2 + (v-independent part)
    /// Degeneracy witness: max over a box around q_PR of
    /// ||grad_xv dH0/dD|| + ||grad_xv dH0/dc||. Zero for fully separable
    /// systems, strictly positive when energy-momentum bifurcations can
    /// reach the resonant circle.
    double instability_witness = 0.0;
    ParabolicResonancePoint q_pr;  // the point the witness box is centered on
    // Raw identity magnitudes, for reporting.
    double max_grad_xv_dh0_dD = 0.0;
    double max_grad_xv_dh0_dc = 0.0;
    double max_d2h0_dDdc = 0.0;
    double max_mechanical_defect = 0.0;
};

StructureReport structure_classify(const SystemDefinition& sys);

} // namespace parares
