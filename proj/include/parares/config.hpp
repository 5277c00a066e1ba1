#pragma once

#include "parares/atmospheric.hpp"
#include "parares/integrate.hpp"
#include "parares/mechanical.hpp"

#include <memory>
#include <string>
#include <vector>

namespace parares {

/// Model selection plus the parameter set of whichever family is chosen.
struct ModelConfig {
    std::string kind = "atmospheric";  // "atmospheric" | "mechanical"
    AtmosphericParams atmospheric{};
    MechanicalParams mechanical{};
    /// Pressure profile for the atmospheric family:
    /// "cos_cube" (uses beta) or "sin2phi_gradient" (uses alpha).
    std::string profile = "cos_cube";
    double alpha = 0.0;

    std::unique_ptr<SystemDefinition> build() const;
};

/// Initial condition in either physical or reduced form. Physical means
/// (phi0, v0, theta0, u0) on the sphere with the wave phase already
/// reduced; it maps through the travelling-wave reduction at t = 0 and
/// only applies to the atmospheric model.
struct InitialConfig {
    std::string kind = "physical";  // "physical" | "reduced"
    double phi0 = 0.0, u0 = 0.0;    // physical
    double x0 = 0.0, D0 = 0.0;      // reduced
    double v0 = 0.0, theta0 = 0.0;  // shared

    PhaseState to_state(const SystemDefinition& sys) const;
};

struct SimulationConfig {
    ModelConfig model;
    std::vector<InitialConfig> initials{InitialConfig{}};
    IntegrationOptions integration{1e-12, 1e-14, 100.0, 0.5, 1e-5};
};

} // namespace parares
