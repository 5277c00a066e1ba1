#pragma once

#include "parares/phase_space.hpp"

namespace parares {

/// Travelling-wave reduction of a physical spherical state at time t:
///   x = phi, v = v, theta = (lambda - c*t)/2,
///   D = cos(phi) * (cos(phi) + 2*u).
/// Requires |phi| < pi/2 - pole_margin and k != 0.
PhaseState to_reduced(const SphericalState& s, double t, double c, int k);

/// Inverse of to_reduced:
///   u = (D/cos(x) - cos(x))/2, lambda = (2*theta + c*t) mod 2*pi.
/// Requires |x| < pi/2 - pole_margin.
SphericalState to_spherical(const PhaseState& p, double t, double c);

} // namespace parares
