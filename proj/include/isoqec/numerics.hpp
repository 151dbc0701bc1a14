#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace isoqec::numerics {

/// Thrown when an iterative numeric procedure (quadrature, series summation)
/// fails to reach the requested tolerance. Carries the best estimate so far.
class numerical_error : public std::runtime_error {
  public:
    numerical_error(const std::string &what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}
    double best_estimate() const { return best_estimate_; }

  private:
    double best_estimate_;
};

/// Sign/log-magnitude representation of a real number. Quantities such as
/// (2d-3)!! and (2pi)^(d-1) overflow double precision already at d = 2^5,
/// so every large coefficient is carried in log space and only ratios are
/// exponentiated.
struct LogScaled {
    int sign = 0;            // -1, 0, +1
    double log_mag = 0.0;    // ln|x|, meaningless when sign == 0

    static LogScaled from_value(double x);
    static LogScaled zero() { return {0, 0.0}; }
    static LogScaled one() { return {1, 0.0}; }

    double value() const;

    LogScaled operator*(const LogScaled &o) const;
    LogScaled operator/(const LogScaled &o) const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// k!! with (-1)!! = 0!! = 1. Exact-integer value for small k (see
/// double_factorial_exact), log-scaled beyond. k < -1 is a domain error.
LogScaled double_factorial(long k);

/// ln(k!!) for k >= -1.
double log_double_factorial(long k);

/// Exact k!! as a 64-bit integer, valid for -1 <= k <= 33.
std::uint64_t double_factorial_exact(int k);

/// Integral of sin^k over [0, pi]: 2 (k-1)!!/k!! for odd k,
/// pi (k-1)!!/k!! for even k.
double wallis_integral(int k);

/// Integral of cos^a sin^b over [0, pi/2].
double cos_sin_halfpi_integral(int a, int b);

enum class KernelKind { plain, cos, sin2d, cos2 };

/// Closed forms of the four kernel integrals
///   int_0^pi g(theta) / (1 + sigma^2 - 2 sigma cos(theta))^d dtheta
/// with g = sin^(2d-2), cos sin^(2d-2), sin^(2d), cos^2 sin^(2d-2).
double kernel_integral(KernelKind kind, int d, double sigma);

/// Surface measure of the unit sphere S^dim embedded in R^(dim+1), dim >= 1.
LogScaled sphere_surface(int dim);

/// ln|S^dim|.
double log_sphere_surface(int dim);

/// Adaptive Gauss-Kronrod (G7/K15) quadrature with interval bisection.
/// Panels are seeded at `breakpoints` (a-priori refinement for integrands
/// with boundary layers). Deterministic for a given f. Throws
/// numerical_error when the evaluation budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)> &f,
                                    double a, double b, double rel_tol,
                                    std::span<const double> breakpoints = {},
                                    int max_evals = 400000);

/// Sums term(1) + term(2) + ... until |term_k| <= rel_tol * |partial sum|
/// + abs_tol holds for 3 consecutive k. Throws numerical_error at k_max.
double sum_series(const std::function<double(long)> &term, double rel_tol,
                  long k_max = 20000, double abs_tol = 0.0);

} // namespace isoqec::numerics
