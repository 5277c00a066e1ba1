#pragma once

#include "parares/phase_space.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace parares {

/// Contract for a near-integrable two-degree-of-freedom system in reduced
/// coordinates (x, v, theta, D) with wave-speed parameter c and
/// perturbation amplitude eps.
///
/// Everything downstream leans on canonical consistency: vector_field must
/// equal (dH/dv, -dH/dx, dH/dD, -dH/dtheta) for the full Hamiltonian, and
/// the hand-coded H0 derivatives must agree with finite differences of
/// unperturbed_hamiltonian(). The test suite enforces both on random
/// in-domain states, so a model edit that breaks the chain fails loudly.
class SystemDefinition {
public:
    virtual ~SystemDefinition() = default;

    /// Full Hamiltonian H = H0 + eps * H1.
    virtual double hamiltonian(const PhaseState& p) const = 0;
    /// Integrable part H0 (independent of theta).
    virtual double unperturbed_hamiltonian(const PhaseState& p) const = 0;
    /// Canonical vector field (dx/dt, dv/dt, dtheta/dt, dD/dt).
    virtual Eigen::Vector4d vector_field(const PhaseState& p) const = 0;

    /// Gradient of H0 in the (x, v) plane; zero exactly on invariant circles.
    virtual Eigen::Vector2d grad_xv_h0(const PhaseState& p) const = 0;
    /// Second partials of H0 with respect to (x, v).
    virtual Eigen::Matrix2d hessian_xv_h0(const PhaseState& p) const = 0;
    /// dH0/dD: the angular rate d(theta)/dt of the unperturbed flow.
    virtual double dh0_dD(const PhaseState& p) const = 0;
    /// dH0/dc at fixed state.
    virtual double dh0_dc(const PhaseState& p) const = 0;

    virtual double wave_speed() const = 0;
    virtual double perturbation() const = 0;
    virtual int wavenumber() const = 0;

    /// True when H is even under (x, v) -> (-x, -v).
    virtual bool reflection_symmetric() const = 0;

    virtual bool in_domain(const PhaseState& p) const = 0;
    /// Half-width of the x-interval used for deterministic root seeding.
    virtual double chart_half_width() const = 0;

    /// Copy of this system with the wave speed replaced.
    virtual std::unique_ptr<SystemDefinition> with_wave_speed(double c) const = 0;
    /// Copy of this system with the perturbation amplitude replaced.
    virtual std::unique_ptr<SystemDefinition> with_perturbation(double eps) const = 0;

    virtual std::string name() const = 0;
};

/// Free-function form of the canonical field, convenient in expressions.
inline Eigen::Vector4d canonical_vector_field(const SystemDefinition& sys,
                                              const PhaseState& p) {
    return sys.vector_field(p);
}

} // namespace parares
