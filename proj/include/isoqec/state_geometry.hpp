#pragma once

#include <vector>

namespace isoqec {

/// Point on the unit sphere S^(2d-1): the 2d real coordinates of an n-qubit
/// state, pairing alpha_k = x_{2k} + i x_{2k+1}.
struct StateVector {
    std::vector<double> coords; // x_0 .. x_{2d-1}
    int d = 0;                  // state-space dimension, coords.size() == 2d
};

/// Hyperspherical angles of a point on S^(2d-1): theta_0..theta_{2d-3} in
/// [0, pi], theta_{2d-2} in [0, 2pi).
struct SphericalAngles {
    std::vector<double> theta;
};

StateVector to_cartesian(const SphericalAngles &angles);

/// Inverse of to_cartesian. At degeneracies (residual sine product zero)
/// the remaining angles are set to 0.
SphericalAngles to_spherical(const StateVector &state);

/// ||Phi - Psi||^2 with Phi = |0>, equal to 2 - 2 x_0.
double deviation_sq(const StateVector &psi);

/// Squared deviation minimized over the global phase: 2 - 2 sqrt(x0^2 + x1^2).
double phase_deviation_sq(const StateVector &psi);

} // namespace isoqec
