#include "isoqec/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "isoqec/numerics.hpp"

namespace isoqec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Coarse ladder covering boundary layers at theta0 = 0 (sigma -> 1) and the
// sin^(2d-2) concentration at pi/2 (large d).
std::vector<double> default_breakpoints() {
    return {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1,  0.3,  0.6, 1.0,
            1.3,  kPi / 2, 1.9,  2.2, 2.5,  2.8, 3.0, 3.1};
}

} // namespace

double IsotropicDensity::log_marginal(double theta0) const {
    const double s = std::sin(theta0);
    if (s <= 0.0)
        return kNegInf;
    return log_s2d2 + log_density(theta0) + (2.0 * d - 2.0) * std::log(s);
}

IsotropicDensity normal_density(double sigma, int d) {
    if (sigma < 0.0 || sigma >= 1.0)
        throw std::domain_error("normal_density: sigma outside [0, 1)");
    if (d < 2)
        throw std::domain_error("normal_density: d < 2");
    IsotropicDensity out;
    out.kind = DensityKind::normal;
    out.sigma = sigma;
    out.d = d;
    out.log_s2d2 = numerics::log_sphere_surface(2 * d - 2);
    const double log_coef = numerics::log_double_factorial(2L * d - 2) - d * kLog2Pi +
                            std::log1p(-sigma * sigma);
    out.log_density = [log_coef, sigma, d](double theta0) {
        const double kern = 1.0 + sigma * sigma - 2.0 * sigma * std::cos(theta0);
        return log_coef - d * std::log(kern);
    };
    out.breakpoints = default_breakpoints();
    return out;
}

IsotropicDensity uniform_density(int d) {
    if (d < 2)
        throw std::domain_error("uniform_density: d < 2");
    IsotropicDensity out;
    out.kind = DensityKind::uniform;
    out.sigma = 0.0;
    out.d = d;
    out.log_s2d2 = numerics::log_sphere_surface(2 * d - 2);
    const double log_f = -numerics::log_sphere_surface(2 * d - 1);
    out.log_density = [log_f](double) { return log_f; };
    out.breakpoints = default_breakpoints();
    return out;
}

IsotropicDensity custom_density(int d, std::function<double(double)> f,
                                std::vector<double> breakpoints) {
    if (d < 2)
        throw std::domain_error("custom_density: d < 2");
    IsotropicDensity out;
    out.kind = DensityKind::custom;
    out.d = d;
    out.log_s2d2 = numerics::log_sphere_surface(2 * d - 2);
    out.log_density = [f = std::move(f)](double theta0) {
        const double v = f(theta0);
        if (v < 0.0)
            throw std::domain_error("custom density is negative");
        return v == 0.0 ? kNegInf : std::log(v);
    };
    out.breakpoints = default_breakpoints();
    out.breakpoints.insert(out.breakpoints.end(), breakpoints.begin(), breakpoints.end());
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    return out;
}

double check_normalization(const IsotropicDensity &density, double rel_tol) {
    const auto r = numerics::integrate_adaptive(
        [&](double t) { return density.marginal(t); }, 0.0, kPi, rel_tol,
        density.breakpoints);
    return std::abs(1.0 - r.value);
}

double ebar(const IsotropicDensity &density, const std::function<double(double)> &g,
            double rel_tol) {
    const auto r = numerics::integrate_adaptive(
        [&](double t) { return density.density(t) * g(t); }, 0.0, kPi, rel_tol,
        density.breakpoints);
    return r.value;
}

double marginal_moment(const IsotropicDensity &density,
                       const std::function<double(double)> &g, double rel_tol,
                       const std::vector<double> &extra_breakpoints) {
    std::vector<double> bp = density.breakpoints;
    bp.insert(bp.end(), extra_breakpoints.begin(), extra_breakpoints.end());
    const auto r = numerics::integrate_adaptive(
        [&](double t) { return density.marginal(t) * g(t); }, 0.0, kPi, rel_tol, bp);
    return r.value;
}

namespace {

// 16-point Gauss-Legendre on [-1, 1], symmetric pairs.
constexpr double kGL16X[8] = {0.0950125098376374402, 0.2816035507792589132,
                              0.4580167776572273863, 0.6178762444026437484,
                              0.7554044083550030339, 0.8656312023878317439,
                              0.9445750230732325761, 0.9894009349916499326};
constexpr double kGL16W[8] = {0.1894506104550684963, 0.1826034150449235889,
                              0.1691565193950025382, 0.1495959888165767320,
                              0.1246289712555338720, 0.0951585116824927848,
                              0.0622535239386478929, 0.0271524594117540949};

template <class F> double gl16(const F &f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kGL16X[i];
        acc += kGL16W[i] * (f(c - dx) + f(c + dx));
    }
    return acc * h;
}

} // namespace

Theta0Sampler::Theta0Sampler(IsotropicDensity density, std::vector<double> t_nodes,
                             std::vector<double> cdf)
    : density_(std::move(density)), t_nodes_(std::move(t_nodes)), cdf_(std::move(cdf)) {}

double Theta0Sampler::weight(double t) const {
    if (t <= -1.0 || t >= 1.0)
        return 0.0;
    const double lw = density_.log_s2d2 + density_.log_density(std::acos(t)) +
                      (density_.d - 1.5) * std::log1p(-t * t);
    return std::exp(lw);
}

double Theta0Sampler::cdf_at(double t) const {
    if (t <= t_nodes_.front())
        return 0.0;
    if (t >= t_nodes_.back())
        return 1.0;
    const auto it = std::upper_bound(t_nodes_.begin(), t_nodes_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_nodes_.begin()) - 1;
    return cdf_[i] + gl16([this](double x) { return weight(x); }, t_nodes_[i], t);
}

double Theta0Sampler::sample_t(Rng &rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    i = std::min(std::max<std::size_t>(i, 1), cdf_.size() - 1) - 1;
    const double c0 = cdf_[i], c1 = cdf_[i + 1];
    const double a = t_nodes_[i], b = t_nodes_[i + 1];
    if (c1 <= c0)
        return a;
    double t = a + (u - c0) / (c1 - c0) * (b - a);
    // Newton polish against the panel-local CDF
    for (int iter = 0; iter < 2; ++iter) {
        const double w = weight(t);
        if (w <= 0.0)
            break;
        const double c = c0 + gl16([this](double x) { return weight(x); }, a, t);
        t -= (c - u) / w;
        t = std::clamp(t, a, b);
    }
    return t;
}

Theta0Sampler build_sampler(const IsotropicDensity &density, int grid_size) {
    if (grid_size < 64)
        throw std::domain_error("build_sampler: grid_size < 64");
    const double residual = check_normalization(density, 1e-9);
    if (residual > 1e-6)
        throw std::invalid_argument("build_sampler: density normalization residual " +
                                    std::to_string(residual) + " exceeds 1e-6");

    // Helper bound to the density; equals Theta0Sampler::weight.
    const auto w = [&](double t) {
        if (t <= -1.0 || t >= 1.0)
            return 0.0;
        return std::exp(density.log_s2d2 + density.log_density(std::acos(t)) +
                        (density.d - 1.5) * std::log1p(-t * t));
    };

    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(grid_size) + 32);
    for (int i = 0; i <= grid_size; ++i)
        nodes.push_back(-1.0 + 2.0 * i / grid_size);
    for (double bp : density.breakpoints) {
        if (bp > 0.0 && bp < kPi)
            nodes.push_back(std::cos(bp));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<double> mass(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        mass[i] = gl16(w, nodes[i], nodes[i + 1]);

    // Split panels whose mass exceeds 1/256 until resolved.
    constexpr double kMaxIncrement = 1.0 / 256.0;
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 64) {
        changed = false;
        std::vector<double> new_nodes;
        std::vector<double> new_mass;
        new_nodes.push_back(nodes.front());
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            if (mass[i] > kMaxIncrement && nodes[i + 1] - nodes[i] > 1e-13) {
                const double mid = 0.5 * (nodes[i] + nodes[i + 1]);
                new_nodes.push_back(mid);
                new_nodes.push_back(nodes[i + 1]);
                new_mass.push_back(gl16(w, nodes[i], mid));
                new_mass.push_back(gl16(w, mid, nodes[i + 1]));
                changed = true;
            } else {
                new_nodes.push_back(nodes[i + 1]);
                new_mass.push_back(mass[i]);
            }
        }
        nodes.swap(new_nodes);
        mass.swap(new_mass);
    }

    std::vector<double> cdf(nodes.size());
    cdf[0] = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i)
        cdf[i + 1] = cdf[i] + mass[i];
    const double total = cdf.back();
    if (std::abs(1.0 - total) > 1e-6)
        throw std::invalid_argument("build_sampler: tabulated CDF total deviates from 1");
    for (double &c : cdf)
        c /= total;
    cdf.back() = 1.0;

    return Theta0Sampler(density, std::move(nodes), std::move(cdf));
}

StateVector sample_state(const Theta0Sampler &sampler, Rng &rng) {
    const int d = sampler.density().d;
    const double t = sampler.sample_t(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));

    StateVector v;
    v.d = d;
    v.coords.resize(2 * static_cast<std::size_t>(d));
    double norm_sq = 0.0;
    for (std::size_t j = 1; j < v.coords.size(); ++j) {
        const double g = rng.normal();
        v.coords[j] = g;
        norm_sq += g * g;
    }
    const double scale = s / std::sqrt(norm_sq);
    for (std::size_t j = 1; j < v.coords.size(); ++j)
        v.coords[j] *= scale;
    v.coords[0] = t;
    return v;
}

} // namespace isoqec
