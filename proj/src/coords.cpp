#include "parares/coords.hpp"

#include <cmath>

namespace parares {

double wrap_two_pi(double angle) {
    double w = std::fmod(angle, two_pi);
    if (w < 0.0) w += two_pi;
    // fmod of a slightly negative value can land exactly on 2*pi after the
    // correction; fold that back onto zero.
    if (w >= two_pi) w = 0.0;
    return w;
}

PhaseState to_reduced(const SphericalState& s, double t, double c, int k) {
    if (k == 0) throw DomainError("to_reduced: wavenumber k must be nonzero");
    if (std::abs(s.phi) >= half_pi - pole_margin)
        throw DomainError("to_reduced: latitude too close to a pole");
    const double cphi = std::cos(s.phi);
    PhaseState p;
    p.x = s.phi;
    p.v = s.v;
    p.theta = 0.5 * (s.lambda - c * t);
    p.D = cphi * (cphi + 2.0 * s.u);
    return p;
}

SphericalState to_spherical(const PhaseState& p, double t, double c) {
    if (std::abs(p.x) >= half_pi - pole_margin)
        throw DomainError("to_spherical: latitude too close to a pole");
    const double cphi = std::cos(p.x);
    SphericalState s;
    s.phi = p.x;
    s.v = p.v;
    s.u = 0.5 * (p.D / cphi - cphi);
    s.lambda = wrap_two_pi(2.0 * p.theta + c * t);
    return s;
}

} // namespace parares
