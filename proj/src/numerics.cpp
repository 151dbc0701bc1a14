#include "isoqec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace isoqec::numerics {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLog2Pi = 1.8378770664093454836; // ln(2*pi)
constexpr double kAbsFloor = 1e-300;
} // namespace

LogScaled LogScaled::from_value(double x) {
    if (x == 0.0)
        return zero();
    return {x > 0.0 ? 1 : -1, std::log(std::abs(x))};
}

double LogScaled::value() const {
    if (sign == 0)
        return 0.0;
    return sign * std::exp(log_mag);
}

LogScaled LogScaled::operator*(const LogScaled &o) const {
    if (sign == 0 || o.sign == 0)
        return zero();
    return {sign * o.sign, log_mag + o.log_mag};
}

LogScaled LogScaled::operator/(const LogScaled &o) const {
    if (o.sign == 0)
        throw std::domain_error("LogScaled: division by zero");
    if (sign == 0)
        return zero();
    return {sign * o.sign, log_mag - o.log_mag};
}

std::uint64_t double_factorial_exact(int k) {
    if (k < -1 || k > 33)
        throw std::domain_error("double_factorial_exact: k out of [-1, 33]");
    std::uint64_t r = 1;
    for (int j = k; j > 1; j -= 2)
        r *= static_cast<std::uint64_t>(j);
    return r;
}

double log_double_factorial(long k) {
    if (k < -1)
        throw std::domain_error("double_factorial: k < -1");
    if (k <= 1)
        return 0.0; // (-1)!! = 0!! = 1!! = 1
    if (k <= 33)
        return std::log(static_cast<double>(double_factorial_exact(static_cast<int>(k))));
    constexpr double kLog2 = std::numbers::ln2;
    if (k % 2 == 0) {
        // (2m)!! = 2^m m!
        const double m = static_cast<double>(k) / 2.0;
        return m * kLog2 + std::lgamma(m + 1.0);
    }
    // (2m+1)!! = (2m+1)! / (2^m m!)
    const double m = static_cast<double>(k - 1) / 2.0;
    return std::lgamma(static_cast<double>(k) + 1.0) - m * kLog2 - std::lgamma(m + 1.0);
}

LogScaled double_factorial(long k) {
    return {1, log_double_factorial(k)};
}

double wallis_integral(int k) {
    if (k < 0)
        throw std::domain_error("wallis_integral: k < 0");
    const double ratio = std::exp(log_double_factorial(k - 1) - log_double_factorial(k));
    return (k % 2 == 1) ? 2.0 * ratio : kPi * ratio;
}

double cos_sin_halfpi_integral(int a, int b) {
    if (a < 0 || b < 0)
        throw std::domain_error("cos_sin_halfpi_integral: negative exponent");
    const double ratio = std::exp(log_double_factorial(a - 1) + log_double_factorial(b - 1) -
                                  log_double_factorial(a + b));
    const bool both_even = (a % 2 == 0) && (b % 2 == 0);
    return both_even ? kPi / 2.0 * ratio : ratio;
}

double kernel_integral(KernelKind kind, int d, double sigma) {
    if (sigma < 0.0 || sigma >= 1.0)
        throw std::domain_error("kernel_integral: sigma outside [0, 1)");
    const int min_d = (kind == KernelKind::sin2d) ? 0 : 1;
    if (d < min_d)
        throw std::domain_error("kernel_integral: d below domain minimum");
    const double om = 1.0 - sigma * sigma;
    switch (kind) {
    case KernelKind::plain:
        return std::exp(log_double_factorial(2L * d - 3) - log_double_factorial(2L * d - 2)) *
               kPi / om;
    case KernelKind::cos:
        return std::exp(log_double_factorial(2L * d - 3) - log_double_factorial(2L * d - 2)) *
               sigma * kPi / om;
    case KernelKind::sin2d:
        return std::exp(log_double_factorial(2L * d - 1) - log_double_factorial(2L * d)) * kPi;
    case KernelKind::cos2:
        return kPi *
               std::exp(log_double_factorial(2L * d - 3) - log_double_factorial(2L * d)) *
               (1.0 + (2.0 * d - 1.0) * sigma * sigma) / om;
    }
    throw std::domain_error("kernel_integral: unknown kind");
}

double log_sphere_surface(int dim) {
    if (dim < 1)
        throw std::domain_error("sphere_surface: dim < 1");
    if (dim % 2 == 0) {
        // |S_{2d}| = 2 (2pi)^d / (2d-1)!!  with 2d = dim
        const long d = dim / 2;
        return std::numbers::ln2 + d * kLog2Pi - log_double_factorial(2 * d - 1);
    }
    // |S_{2d-1}| = (2pi)^d / (2d-2)!!  with 2d-1 = dim
    const long d = (dim + 1) / 2;
    return d * kLog2Pi - log_double_factorial(2 * d - 2);
}

LogScaled sphere_surface(int dim) {
    return {1, log_sphere_surface(dim)};
}

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
// Rows: abscissa, Gauss weight (0 where the node is Kronrod-only), Kronrod weight.
constexpr double kGK[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0, 0.204432940075298892},
    {0.586087235467691130, 0.0, 0.169004726639267903},
    {0.864864423359769073, 0.0, 0.104790010322250184},
    {0.991455371120812639, 0.0, 0.022935322010529225},
};

struct Panel {
    double a, b;
    double value;
    double error;
    double abs_int; // integral of |f|, roundoff scale
    long order;     // creation index, deterministic tie-break
};

struct PanelLess {
    bool operator()(const Panel &x, const Panel &y) const {
        if (x.error != y.error)
            return x.error < y.error;
        return x.order > y.order;
    }
};

Panel eval_panel(const std::function<double(double)> &f, double a, double b, long order) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double y0 = f(c);
    double g7 = kGK[0][1] * y0;
    double k15 = kGK[0][2] * y0;
    double abs_int = kGK[0][2] * std::abs(y0);
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kGK[i][0];
        const double yl = f(c - dx);
        const double yr = f(c + dx);
        g7 += kGK[i][1] * (yl + yr);
        k15 += kGK[i][2] * (yl + yr);
        abs_int += kGK[i][2] * (std::abs(yl) + std::abs(yr));
    }
    g7 *= h;
    k15 *= h;
    abs_int *= std::abs(h);
    // quadpack-style sharpened estimate
    double err = std::abs(g7 - k15);
    if (abs_int > 0.0 && err > 0.0)
        err = abs_int * std::min(1.0, std::pow(200.0 * err / abs_int, 1.5));
    return {a, b, k15, err, abs_int, order};
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                                    double rel_tol, std::span<const double> breakpoints,
                                    int max_evals) {
    if (!(rel_tol > 0.0))
        throw std::domain_error("integrate_adaptive: rel_tol must be positive");
    if (a == b)
        return {0.0, 0.0, 0};

    std::vector<double> nodes;
    nodes.push_back(a);
    for (double p : breakpoints)
        if (p > std::min(a, b) && p < std::max(a, b))
            nodes.push_back(p);
    nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    if (a > b)
        std::reverse(nodes.begin(), nodes.end());

    std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
    long order = 0;
    int evals = 0;
    double total = 0.0, total_err = 0.0, total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        Panel p = eval_panel(f, nodes[i], nodes[i + 1], order++);
        evals += 15;
        total += p.value;
        total_err += p.error;
        total_abs += p.abs_int;
        heap.push(p);
    }

    // Second clause: roundoff floor for strongly cancelling integrands, where
    // no refinement can push the estimate below ~eps * integral of |f|.
    const auto converged = [&] {
        return total_err <= rel_tol * std::abs(total) + kAbsFloor ||
               total_err <= 5e-15 * total_abs;
    };
    while (!converged()) {
        if (evals + 30 > max_evals)
            throw numerical_error("integrate_adaptive: evaluation budget exhausted", total);
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            // interval at machine resolution; accept its estimate
            worst.error = 0.0;
            heap.push(worst);
            if (heap.top().error == 0.0)
                break;
            continue;
        }
        Panel left = eval_panel(f, worst.a, mid, order++);
        Panel right = eval_panel(f, mid, worst.b, order++);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_int + right.abs_int - worst.abs_int;
        heap.push(left);
        heap.push(right);
    }
    return {total, total_err, evals};
}

double sum_series(const std::function<double(long)> &term, double rel_tol, long k_max,
                  double abs_tol) {
    if (!(rel_tol > 0.0))
        throw std::domain_error("sum_series: rel_tol must be positive");
    const double floor = std::max(abs_tol, kAbsFloor);
    double sum = 0.0;
    int small_streak = 0;
    for (long k = 1; k <= k_max; ++k) {
        const double t = term(k);
        sum += t;
        if (std::abs(t) <= rel_tol * std::abs(sum) + floor)
            ++small_streak;
        else
            small_streak = 0;
        if (small_streak >= 3)
            return sum;
    }
    throw numerical_error("sum_series: no convergence before k_max", sum);
}

} // namespace isoqec::numerics
