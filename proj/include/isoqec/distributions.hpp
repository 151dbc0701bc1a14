#pragma once

#include <functional>
#include <vector>

#include "isoqec/rng.hpp"
#include "isoqec/state_geometry.hpp"

namespace isoqec {

enum class DensityKind { normal, uniform, custom };

/// Isotropic error density on S^(2d-1): f depends on the polar angle
/// theta0 alone. The density is carried as ln f(theta0) because the
/// normalization coefficient (2d-2)!!/(2pi)^d overflows double precision
/// at d = 2^n for n >= 5.
struct IsotropicDensity {
    DensityKind kind = DensityKind::uniform;
    double sigma = 0.0; // normal family only
    int d = 2;          // state-space dimension, states live on S^(2d-1)
    std::function<double(double)> log_density; // ln f(theta0), -inf where f = 0
    std::vector<double> breakpoints;           // quadrature seeds in theta0
    double log_s2d2 = 0.0;                     // ln|S_(2d-2)|, cached

    double density(double theta0) const { return std::exp(log_density(theta0)); }

    /// ln of the polar-angle marginal |S_(2d-2)| f(theta0) sin^(2d-2)(theta0),
    /// an O(1) probability density on [0, pi].
    double log_marginal(double theta0) const;
    double marginal(double theta0) const { return std::exp(log_marginal(theta0)); }
};

/// Normal family: f(theta0) = (2d-2)!!/(2pi)^d (1-sigma^2)/(1+sigma^2-2 sigma cos theta0)^d.
IsotropicDensity normal_density(double sigma, int d);

/// Constant density 1/|S_(2d-1)|.
IsotropicDensity uniform_density(int d);

/// User-supplied f(theta0) >= 0, optionally with breakpoints at
/// discontinuities. Accepted as-is; normalization is the caller's problem
/// until the sampler checks it.
IsotropicDensity custom_density(int d, std::function<double(double)> f,
                                std::vector<double> breakpoints = {});

/// |1 - |S_(2d-2)| int_0^pi f sin^(2d-2) dtheta0|.
double check_normalization(const IsotropicDensity &density, double rel_tol = 1e-10);

/// Ebar[g] = int_0^pi f(theta0) g(theta0) dtheta0. Raw, unstabilized form;
/// overflows for large d, kept for small-d cross-checks.
double ebar(const IsotropicDensity &density, const std::function<double(double)> &g,
            double rel_tol = 1e-10);

/// E[g(theta0)] under the true polar-angle marginal; O(1) for bounded g.
/// Extra breakpoints (e.g. around a sharp factor in g) may be supplied.
double marginal_moment(const IsotropicDensity &density,
                       const std::function<double(double)> &g, double rel_tol = 1e-10,
                       const std::vector<double> &extra_breakpoints = {});

/// Inverse-CDF sampler for theta0 in the substituted variable t = cos(theta0).
/// The t-marginal is proportional to f(arccos t) (1-t^2)^((2d-3)/2) on [-1, 1];
/// the sigma -> 1 concentration becomes a boundary layer at t = 1 handled by
/// grid refinement.
class Theta0Sampler {
  public:
    Theta0Sampler(IsotropicDensity density, std::vector<double> t_nodes,
                  std::vector<double> cdf);

    const IsotropicDensity &density() const { return density_; }
    std::size_t grid_size() const { return t_nodes_.size(); }
    const std::vector<double> &cdf_grid() const { return cdf_; }
    const std::vector<double> &t_grid() const { return t_nodes_; }

    /// CDF of the t-marginal (exact to panel-local quadrature accuracy).
    double cdf_at(double t) const;

    /// Draws t = cos(theta0): tabulated inverse CDF plus Newton polish.
    double sample_t(Rng &rng) const;

  private:
    double weight(double t) const; // t-marginal density
    IsotropicDensity density_;
    std::vector<double> t_nodes_; // increasing over [-1, 1]
    std::vector<double> cdf_;     // cdf_[i] = CDF(t_nodes_[i]), 0 .. 1
};

/// Tabulates the CDF on an adaptively refined grid (panels split until no
/// CDF increment exceeds 1/256). Throws std::invalid_argument when the
/// density's normalization residual exceeds 1e-6.
Theta0Sampler build_sampler(const IsotropicDensity &density, int grid_size = 4096);

/// Draws a full state: theta0 from the sampler, a uniform tangent direction
/// on S^(2d-2) from normalized Gaussian variates.
StateVector sample_state(const Theta0Sampler &sampler, Rng &rng);

} // namespace isoqec
