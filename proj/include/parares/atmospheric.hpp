#pragma once

#include "parares/system.hpp"

#include <memory>

namespace parares {

/// Even latitude profile together with its first two derivatives.
/// Implementations must keep the three functions analytically consistent;
/// the model tests cross-check them by finite differences.
class LatitudeProfile {
public:
    virtual ~LatitudeProfile() = default;
    virtual double value(double phi) const = 0;
    virtual double slope(double phi) const = 0;      // d/dphi
    virtual double curvature(double phi) const = 0;  // d^2/dphi^2
    virtual bool identically_zero() const { return false; }
    virtual std::string name() const = 0;
};

/// amp * cos^3(phi), the standard zonal pressure profile family.
class CosCubeProfile final : public LatitudeProfile {
public:
    explicit CosCubeProfile(double amp) : amp_(amp) {}
    double value(double phi) const override;
    double slope(double phi) const override;
    double curvature(double phi) const override;
    bool identically_zero() const override { return amp_ == 0.0; }
    std::string name() const override { return "cos_cube"; }
    double amplitude() const { return amp_; }

private:
    double amp_;
};

/// Profile defined through its gradient B'(phi) = alpha * sin(2*phi),
/// i.e. B(phi) = (alpha/2) * (1 - cos(2*phi)). For this family the
/// angular rate is constant along the whole elliptic branch, which makes
/// it the exactly-flat reference case for the flatness diagnostics.
class SinTwoPhiGradientProfile final : public LatitudeProfile {
public:
    explicit SinTwoPhiGradientProfile(double alpha) : alpha_(alpha) {}
    double value(double phi) const override;
    double slope(double phi) const override;
    double curvature(double phi) const override;
    bool identically_zero() const override { return alpha_ == 0.0; }
    std::string name() const override { return "sin2phi_gradient"; }
    double alpha() const { return alpha_; }

private:
    double alpha_;
};

struct AtmosphericParams {
    int k = 3;          // integer zonal wavenumber, nonzero
    double c = 0.0;     // wave speed, >= -1/2
    double eps = 0.0;   // wave amplitude, >= 0
    double beta = 0.0;  // sets the default pressure profile B = (beta/3) cos^3
};

/// Quasi-inertial particle motion on the rotating sphere in a zonal wave
/// field, reduced by the travelling-wave substitution theta = (lambda - c t)/2
/// to the autonomous two-degree-of-freedom Hamiltonian
///
///   H = v^2/2 + (D/cos x - cos x)^2 / 8 - (c/2) D + B(x)
///       + eps * A(x) * sin(2 k theta)
///
/// with wave profile A = cos^3 fixed and pressure profile B swappable
/// (default (beta/3) cos^3). x is latitude, v its momentum; the chart
/// excludes the poles.
class AtmosphericSystem final : public SystemDefinition {
public:
    explicit AtmosphericSystem(const AtmosphericParams& params);
    AtmosphericSystem(const AtmosphericParams& params,
                      std::shared_ptr<const LatitudeProfile> pressure);

    const AtmosphericParams& params() const { return params_; }
    const LatitudeProfile& pressure_profile() const { return *pressure_; }
    std::shared_ptr<const LatitudeProfile> pressure_profile_ptr() const {
        return pressure_;
    }

    double wave_amplitude(double phi) const;        // A(phi) = cos^3(phi)
    double wave_amplitude_slope(double phi) const;  // A'(phi)

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
    bool reflection_symmetric() const override { return true; }
    bool in_domain(const PhaseState& p) const override;
    double chart_half_width() const override { return half_pi - 0.05; }

    std::unique_ptr<SystemDefinition> with_wave_speed(double c) const override;
    std::unique_ptr<SystemDefinition> with_perturbation(double eps) const override;
    std::string name() const override { return "atmospheric"; }

private:
    void require_in_chart(double x) const;

    AtmosphericParams params_;
    std::shared_ptr<const LatitudeProfile> pressure_;
};

} // namespace parares
