#include "isoqec/state_geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isoqec {

StateVector to_cartesian(const SphericalAngles &angles) {
    const std::size_t n_angles = angles.theta.size();
    if (n_angles < 3 || n_angles % 2 == 0)
        throw std::invalid_argument("to_cartesian: need 2d-1 angles with d >= 2");
    const std::size_t n = n_angles + 1; // 2d coordinates
    StateVector v;
    v.d = static_cast<int>(n / 2);
    v.coords.resize(n);
    double sines = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        v.coords[j] = sines * std::cos(angles.theta[j]);
        sines *= std::sin(angles.theta[j]);
    }
    v.coords[n - 1] = sines;
    return v;
}

SphericalAngles to_spherical(const StateVector &state) {
    const std::size_t n = state.coords.size();
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("to_spherical: need 2d coordinates with d >= 2");
    SphericalAngles a;
    a.theta.assign(n - 1, 0.0);
    // tail[j] = sqrt(x_j^2 + ... + x_{n-1}^2), accumulated back-to-front for accuracy
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;)
        tail[j] = std::hypot(state.coords[j], tail[j + 1]);
    for (std::size_t j = 0; j + 2 < n; ++j) {
        if (tail[j] == 0.0)
            return a; // degenerate: remaining angles stay 0
        a.theta[j] = std::atan2(tail[j + 1], state.coords[j]); // in [0, pi]
    }
    // last angle spans [0, 2pi)
    if (tail[n - 2] == 0.0)
        return a;
    double last = std::atan2(state.coords[n - 1], state.coords[n - 2]);
    if (last < 0.0)
        last += 2.0 * std::numbers::pi;
    a.theta[n - 2] = last;
    return a;
}

double deviation_sq(const StateVector &psi) {
    return 2.0 - 2.0 * psi.coords.at(0);
}

double phase_deviation_sq(const StateVector &psi) {
    return 2.0 - 2.0 * std::hypot(psi.coords.at(0), psi.coords.at(1));
}

} // namespace isoqec
