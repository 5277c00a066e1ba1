#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>

namespace parares {

/// Thrown when an evaluation leaves the coordinate chart, e.g. the
/// atmospheric model too close to a pole where cos(x) degenerates.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = 0.5 * std::numbers::pi;

/// Chart margin at the poles: atmospheric evaluations with
/// |x| >= pi/2 - pole_margin raise DomainError rather than returning
/// astronomically large numbers from the sec^4 term.
inline constexpr double pole_margin = 1e-6;

/// Reduce an angle to [0, 2*pi).
double wrap_two_pi(double angle);

/// Reduced canonical state (x, v, theta, D).
///
/// x is the latitude-like coordinate (radians for the atmospheric model)
/// and v its conjugate momentum. theta is the travelling-wave angle, kept
/// unwrapped so that cell-transition diagnostics can count crossings;
/// wrap only at output via theta_wrapped(). D is the action conjugate to
/// theta, conserved by the unperturbed flow.
struct PhaseState {
    double x = 0.0;
    double v = 0.0;
    double theta = 0.0;  // unwrapped
    double D = 0.0;

    double theta_wrapped() const { return wrap_two_pi(theta); }

    Eigen::Vector4d as_vector() const { return {x, v, theta, D}; }
    static PhaseState from_vector(const Eigen::Vector4d& y) {
        return {y[0], y[1], y[2], y[3]};
    }
};

/// Physical state on the rotating sphere: longitude lambda, latitude phi
/// (radians, |phi| < pi/2), eastward velocity u and northward velocity v,
/// all nondimensional.
struct SphericalState {
    double lambda = 0.0;
    double phi = 0.0;
    double u = 0.0;
    double v = 0.0;
};

} // namespace parares
