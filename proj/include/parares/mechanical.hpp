#pragma once

#include "parares/system.hpp"

namespace parares {

struct MechanicalParams {
    double a1 = 1.0;  // quadratic stiffness coupling to (1 - D)
    double a2 = 0.0;  // cubic asymmetry; zero keeps the reflection symmetry
    double a3 = 1.0;  // quartic stiffness, > 0
    double b = 0.5;   // action-inertia offset, > -1/(2*a3)
    double c = 0.0;   // wave speed
    double eps = 0.0; // forcing amplitude, >= 0
    int k = 3;        // forcing wavenumber, nonzero

    /// Effective inverse inertia of D: dtheta/dt = s*(D-1) - c - a1*x^2/2.
    double s() const { return 1.0 / (2.0 * a3) + b; }
};

/// Polynomial normal form of a natural mechanical system with one angular
/// symmetry, the minimal setting exhibiting the same degenerate-resonance
/// hierarchy as the atmospheric model:
///
///   H = (1/(2 a3) + b) (D-1)^2 / 2 - c D + v^2/2
///       + a1 x^2 (1-D)/2 + a2 x^3/3 + a3 x^4/4
///       + eps (1 - x^2/2) cos(k theta)
///
/// The x-chart is unbounded; chart_half_width() only scopes root seeding.
class MechanicalSystem final : public SystemDefinition {
public:
    explicit MechanicalSystem(const MechanicalParams& params);

    const MechanicalParams& params() const { return params_; }

    double hamiltonian(const PhaseState& p) const override;
    double unperturbed_hamiltonian(const PhaseState& p) const override;
    Eigen::Vector4d vector_field(const PhaseState& p) const override;
    Eigen::Vector2d grad_xv_h0(const PhaseState& p) const override;
    Eigen::Matrix2d hessian_xv_h0(const PhaseState& p) const override;
    double dh0_dD(const PhaseState& p) const override;
    double dh0_dc(const PhaseState& p) const override;

    double wave_speed() const override { return params_.c; }
    double perturbation() const override { return params_.eps; }
    int wavenumber() const override { return params_.k; }
    bool reflection_symmetric() const override { return params_.a2 == 0.0; }
    bool in_domain(const PhaseState&) const override { return true; }
    double chart_half_width() const override { return 2.0; }

    std::unique_ptr<SystemDefinition> with_wave_speed(double c) const override;
    std::unique_ptr<SystemDefinition> with_perturbation(double eps) const override;
    std::string name() const override { return "mechanical"; }

private:
    MechanicalParams params_;
};

} // namespace parares
