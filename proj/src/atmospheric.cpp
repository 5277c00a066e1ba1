#include "parares/atmospheric.hpp"

#include <cmath>
#include <stdexcept>

namespace parares {

double CosCubeProfile::value(double phi) const {
    const double c = std::cos(phi);
    return amp_ * c * c * c;
}

double CosCubeProfile::slope(double phi) const {
    const double c = std::cos(phi);
    return -3.0 * amp_ * c * c * std::sin(phi);
}

double CosCubeProfile::curvature(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    return 3.0 * amp_ * c * (2.0 * s * s - c * c);
}

double SinTwoPhiGradientProfile::value(double phi) const {
    return 0.5 * alpha_ * (1.0 - std::cos(2.0 * phi));
}

double SinTwoPhiGradientProfile::slope(double phi) const {
    return alpha_ * std::sin(2.0 * phi);
}

double SinTwoPhiGradientProfile::curvature(double phi) const {
    return 2.0 * alpha_ * std::cos(2.0 * phi);
}

namespace {

void validate(const AtmosphericParams& p) {
    if (p.k == 0)
        throw std::invalid_argument("AtmosphericSystem: wavenumber k must be nonzero");
    if (p.c < -0.5)
        throw std::invalid_argument("AtmosphericSystem: wave speed c must be >= -1/2");
    if (p.eps < 0.0)
        throw std::invalid_argument("AtmosphericSystem: eps must be >= 0");
    if (p.beta < 0.0)
        throw std::invalid_argument("AtmosphericSystem: beta must be >= 0");
}

} // namespace

AtmosphericSystem::AtmosphericSystem(const AtmosphericParams& params)
    : AtmosphericSystem(params,
                        std::make_shared<CosCubeProfile>(params.beta / 3.0)) {}

AtmosphericSystem::AtmosphericSystem(const AtmosphericParams& params,
                                     std::shared_ptr<const LatitudeProfile> pressure)
    : params_(params), pressure_(std::move(pressure)) {
    validate(params_);
    if (!pressure_)
        throw std::invalid_argument("AtmosphericSystem: null pressure profile");
}

void AtmosphericSystem::require_in_chart(double x) const {
    if (!(std::abs(x) < half_pi - pole_margin))
        throw DomainError("atmospheric: latitude out of chart");
}

bool AtmosphericSystem::in_domain(const PhaseState& p) const {
    return std::abs(p.x) < half_pi - pole_margin;
}

double AtmosphericSystem::wave_amplitude(double phi) const {
    const double c = std::cos(phi);
    return c * c * c;
}

double AtmosphericSystem::wave_amplitude_slope(double phi) const {
    const double c = std::cos(phi);
    return -3.0 * c * c * std::sin(phi);
}

double AtmosphericSystem::unperturbed_hamiltonian(const PhaseState& p) const {
    require_in_chart(p.x);
    const double cx = std::cos(p.x);
    const double w = p.D / cx - cx;  // 2u in physical variables
    return 0.5 * p.v * p.v + 0.125 * w * w - 0.5 * params_.c * p.D
         + pressure_->value(p.x);
}

double AtmosphericSystem::hamiltonian(const PhaseState& p) const {
    return unperturbed_hamiltonian(p)
         + params_.eps * wave_amplitude(p.x)
               * std::sin(2.0 * params_.k * p.theta);
}

Eigen::Vector4d AtmosphericSystem::vector_field(const PhaseState& p) const {
    require_in_chart(p.x);
    const double cx = std::cos(p.x);
    const double c2 = cx * cx;
    const double ratio = p.D * p.D / (c2 * c2);
    const double s2x = std::sin(2.0 * p.x);
    const double phase = 2.0 * params_.k * p.theta;

    Eigen::Vector4d f;
    f[0] = p.v;
    f[1] = 0.125 * s2x * (1.0 - ratio) - pressure_->slope(p.x)
         - params_.eps * wave_amplitude_slope(p.x) * std::sin(phase);
    f[2] = 0.25 * p.D / c2 - 0.5 * (params_.c + 0.5);
    f[3] = -2.0 * params_.k * params_.eps * wave_amplitude(p.x)
         * std::cos(phase);
    return f;
}

Eigen::Vector2d AtmosphericSystem::grad_xv_h0(const PhaseState& p) const {
    require_in_chart(p.x);
    const double cx = std::cos(p.x);
    const double c2 = cx * cx;
    const double ratio = p.D * p.D / (c2 * c2);
    return {-0.125 * std::sin(2.0 * p.x) * (1.0 - ratio) + pressure_->slope(p.x),
            p.v};
}

Eigen::Matrix2d AtmosphericSystem::hessian_xv_h0(const PhaseState& p) const {
    require_in_chart(p.x);
    const double cx = std::cos(p.x), sx = std::sin(p.x);
    const double c2 = cx * cx;
    const double ratio = p.D * p.D / (c2 * c2);
    Eigen::Matrix2d h;
    h(0, 0) = -0.25 * std::cos(2.0 * p.x) * (1.0 - ratio)
            + ratio * sx * sx + pressure_->curvature(p.x);
    h(0, 1) = 0.0;
    h(1, 0) = 0.0;
    h(1, 1) = 1.0;
    return h;
}

double AtmosphericSystem::dh0_dD(const PhaseState& p) const {
    require_in_chart(p.x);
    const double cx = std::cos(p.x);
    return 0.25 * p.D / (cx * cx) - 0.5 * (params_.c + 0.5);
}

double AtmosphericSystem::dh0_dc(const PhaseState& p) const {
    return -0.5 * p.D;
}

std::unique_ptr<SystemDefinition> AtmosphericSystem::with_wave_speed(double c) const {
    AtmosphericParams q = params_;
    q.c = c;
    return std::make_unique<AtmosphericSystem>(q, pressure_);
}

std::unique_ptr<SystemDefinition> AtmosphericSystem::with_perturbation(double eps) const {
    AtmosphericParams q = params_;
    q.eps = eps;
    return std::make_unique<AtmosphericSystem>(q, pressure_);
}

} // namespace parares
