#include "parares/mechanical.hpp"

#include <cmath>
#include <stdexcept>

namespace parares {

MechanicalSystem::MechanicalSystem(const MechanicalParams& params)
    : params_(params) {
    if (!(params_.a3 > 0.0))
        throw std::invalid_argument("MechanicalSystem: a3 must be > 0");
    if (!(params_.b > -1.0 / (2.0 * params_.a3)))
        throw std::invalid_argument("MechanicalSystem: b must be > -1/(2*a3)");
    if (params_.eps < 0.0)
        throw std::invalid_argument("MechanicalSystem: eps must be >= 0");
    if (params_.k == 0)
        throw std::invalid_argument("MechanicalSystem: wavenumber k must be nonzero");
}

double MechanicalSystem::unperturbed_hamiltonian(const PhaseState& p) const {
    const auto& q = params_;
    const double d1 = p.D - 1.0;
    const double x2 = p.x * p.x;
    return 0.5 * q.s() * d1 * d1 - q.c * p.D + 0.5 * p.v * p.v
         + 0.5 * q.a1 * x2 * (1.0 - p.D)
         + q.a2 * x2 * p.x / 3.0 + 0.25 * q.a3 * x2 * x2;
}

double MechanicalSystem::hamiltonian(const PhaseState& p) const {
    const auto& q = params_;
    return unperturbed_hamiltonian(p)
         + q.eps * (1.0 - 0.5 * p.x * p.x) * std::cos(q.k * p.theta);
}

Eigen::Vector4d MechanicalSystem::vector_field(const PhaseState& p) const {
    const auto& q = params_;
    const double phase = q.k * p.theta;
    Eigen::Vector4d f;
    f[0] = p.v;
    f[1] = q.a1 * (p.D - 1.0) * p.x - q.a2 * p.x * p.x - q.a3 * p.x * p.x * p.x
         + q.eps * p.x * std::cos(phase);
    f[2] = q.s() * (p.D - 1.0) - q.c - 0.5 * q.a1 * p.x * p.x;
    f[3] = q.k * q.eps * (1.0 - 0.5 * p.x * p.x) * std::sin(phase);
    return f;
}

Eigen::Vector2d MechanicalSystem::grad_xv_h0(const PhaseState& p) const {
    const auto& q = params_;
    return {q.a1 * p.x * (1.0 - p.D) + q.a2 * p.x * p.x + q.a3 * p.x * p.x * p.x,
            p.v};
}

Eigen::Matrix2d MechanicalSystem::hessian_xv_h0(const PhaseState& p) const {
    const auto& q = params_;
    Eigen::Matrix2d h;
    h(0, 0) = q.a1 * (1.0 - p.D) + 2.0 * q.a2 * p.x + 3.0 * q.a3 * p.x * p.x;
    h(0, 1) = 0.0;
    h(1, 0) = 0.0;
    h(1, 1) = 1.0;
    return h;
}

double MechanicalSystem::dh0_dD(const PhaseState& p) const {
    const auto& q = params_;
    return q.s() * (p.D - 1.0) - q.c - 0.5 * q.a1 * p.x * p.x;
}

double MechanicalSystem::dh0_dc(const PhaseState& p) const {
    return -p.D;
}

std::unique_ptr<SystemDefinition> MechanicalSystem::with_wave_speed(double c) const {
    MechanicalParams q = params_;
    q.c = c;
    return std::make_unique<MechanicalSystem>(q);
}

std::unique_ptr<SystemDefinition> MechanicalSystem::with_perturbation(double eps) const {
    MechanicalParams q = params_;
    q.eps = eps;
    return std::make_unique<MechanicalSystem>(q);
}

} // namespace parares
