#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "isoqec/distributions.hpp"
#include "isoqec/numerics.hpp"

using namespace isoqec;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("normal density closed-form values") {
    // sigma = 0 reduces to the uniform constant 1/|S_(2d-1)|
    for (int d : {2, 4, 8, 16}) {
        const auto nd = normal_density(0.0, d);
        const double expect = std::exp(-numerics::log_sphere_surface(2 * d - 1));
        CHECK(nd.density(0.3) == doctest::Approx(expect).epsilon(1e-13));
        const auto ud = uniform_density(d);
        for (double th : {0.0, 0.7, kPi / 2, 2.9, kPi})
            CHECK(nd.density(th) == doctest::Approx(ud.density(th)).epsilon(1e-14));
    }
    // direct substitution at sigma = 0.5, d = 2, theta0 = 0
    const auto n2 = normal_density(0.5, 2);
    CHECK(n2.density(0.0) == doctest::Approx(6.0 / (kPi * kPi)).epsilon(1e-13));
    CHECK_THROWS_AS(normal_density(1.0, 2), std::domain_error);
    CHECK_THROWS_AS(normal_density(-0.1, 2), std::domain_error);
}

TEST_CASE("normal density is monotone decreasing for sigma > 0 (d = 8 curve)") {
    const auto nd = normal_density(0.9, 8);
    double prev = nd.density(0.0);
    for (int i = 1; i <= 64; ++i) {
        const double cur = nd.density(kPi * i / 64.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("normalization residuals across the sigma/d grid") {
    for (double sigma : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99})
        for (int d : {2, 4, 8, 16})
            CHECK(check_normalization(normal_density(sigma, d)) < 1e-8);
    CHECK(check_normalization(uniform_density(4)) < 1e-10);
}

TEST_CASE("unnormalized custom density has nonzero residual") {
    const int d = 3;
    const auto f1 = custom_density(d, [](double) { return 1.0; });
    const double expected = std::abs(1.0 - std::exp(numerics::log_sphere_surface(2 * d - 2)) *
                                               numerics::wallis_integral(2 * d - 2));
    CHECK(check_normalization(f1) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(check_normalization(f1) > 0.1);
    CHECK_THROWS_AS(build_sampler(f1), std::invalid_argument);
}

TEST_CASE("ebar identities") {
    for (int d : {2, 4}) {
        for (double sigma : {0.0, 0.5, 0.9}) {
            const auto nd = normal_density(sigma, d);
            // Ebar[sin^(2d-2)] = 1/|S_(2d-2)|
            const double lhs = ebar(nd, [d](double t) {
                return std::pow(std::sin(t), 2.0 * d - 2.0);
            });
            CHECK(lhs == doctest::Approx(std::exp(-nd.log_s2d2)).epsilon(1e-9));
        }
    }
    // odd symmetry under the uniform density
    const auto ud = uniform_density(3);
    const double v = ebar(ud, [](double t) {
        return std::cos(t) * std::pow(std::sin(t), 4.0);
    });
    CHECK(std::abs(v) < 1e-12);
    // normal case against the closed-form kernel integral
    for (int d : {2, 3, 4}) {
        const double sigma = 0.6;
        const auto nd = normal_density(sigma, d);
        const double log_coef = numerics::log_double_factorial(2L * d - 2) -
                                d * std::log(2.0 * kPi) + std::log1p(-sigma * sigma);
        const double direct = ebar(nd, [d](double t) {
            return std::cos(t) * std::pow(std::sin(t), 2.0 * d - 2.0);
        });
        const double closed =
            std::exp(log_coef) * numerics::kernel_integral(numerics::KernelKind::cos, d, sigma);
        CHECK(direct == doctest::Approx(closed).epsilon(1e-9));
    }
}

TEST_CASE("marginal moments") {
    const auto ud = uniform_density(4);
    CHECK(marginal_moment(ud, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(marginal_moment(ud, [](double t) { return std::cos(t); })) < 1e-12);
    // E[cos theta0] = sigma = 1 - V/2 for the normal family
    const auto nd = normal_density(0.5, 4);
    CHECK(marginal_moment(nd, [](double t) { return std::cos(t); }) ==
          doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sampler CDF grid invariants") {
    const auto sampler = build_sampler(normal_density(0.9, 4));
    const auto &cdf = sampler.cdf_grid();
    CHECK(cdf.front() == 0.0);
    CHECK(cdf.back() == 1.0);
    for (std::size_t i = 1; i < cdf.size(); ++i)
        CHECK(cdf[i] >= cdf[i - 1] - 1e-12);
    // no CDF increment exceeds the refinement bound
    for (std::size_t i = 1; i < cdf.size(); ++i)
        CHECK(cdf[i] - cdf[i - 1] <= 1.0 / 256.0 + 1e-9);
}

TEST_CASE("sampler inversion error below 1e-9") {
    const auto sampler = build_sampler(normal_density(0.9, 8));
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        Rng probe(seed);
        const double u = probe.uniform();
        Rng rng(seed);
        const double t = sampler.sample_t(rng);
        CHECK(std::abs(sampler.cdf_at(t) - u) <= 1e-9);
    }
}

TEST_CASE("uniform sampler moments: mean 0, variance 1/(2d)") {
    const int d = 2;
    const auto sampler = build_sampler(uniform_density(d));
    Rng rng(42);
    const long n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double t = sampler.sample_t(rng);
        sum += t;
        sum_sq += t * t;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double se_mean = std::sqrt(var / n);
    CHECK(std::abs(mean) <= 3.0 * se_mean);
    // Var of t^2 for uniform on S^3: E[t^4] = 3/(2d(2d+2)) = 1/8
    const double se_var = std::sqrt((1.0 / 8.0 - 0.25 * 0.25) / n);
    CHECK(std::abs(var - 1.0 / (2.0 * d)) <= 3.0 * se_var);
}

TEST_CASE("sampler tail probability matches quadrature") {
    const auto density = normal_density(0.9, 4);
    const auto sampler = build_sampler(density);
    // P(theta0 < pi/4) = CDF of t-marginal above cos(pi/4)
    const double p_target = 1.0 - sampler.cdf_at(std::cos(kPi / 4));
    // independent quadrature of the theta-marginal over [0, pi/4]
    const auto q = numerics::integrate_adaptive(
        [&](double th) { return density.marginal(th); }, 0.0, kPi / 4, 1e-10,
        density.breakpoints);
    CHECK(p_target == doctest::Approx(q.value).epsilon(1e-7));
    Rng rng(7);
    const long n = 100000;
    long hits = 0;
    for (long i = 0; i < n; ++i)
        if (sampler.sample_t(rng) > std::cos(kPi / 4))
            ++hits;
    const double p_hat = static_cast<double>(hits) / n;
    const double se = std::sqrt(p_target * (1.0 - p_target) / n);
    CHECK(std::abs(p_hat - p_target) <= 3.0 * se);
}

TEST_CASE("sample_state geometry and tangent isotropy") {
    const int d = 4;
    const auto sampler = build_sampler(normal_density(0.5, d));
    Rng rng(123);
    const long n = 50000;
    std::vector<double> sum(2 * d, 0.0);
    std::vector<double> sum_sq(2 * d, 0.0);
    double cross = 0.0; // one off-diagonal pair
    double sin_sq_sum = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto v = sample_state(sampler, rng);
        double norm_sq = 0.0;
        for (double x : v.coords)
            norm_sq += x * x;
        REQUIRE(std::abs(norm_sq - 1.0) < 1e-12);
        for (int j = 0; j < 2 * d; ++j) {
            sum[j] += v.coords[j];
            sum_sq[j] += v.coords[j] * v.coords[j];
        }
        cross += v.coords[1] * v.coords[2];
        sin_sq_sum += 1.0 - v.coords[0] * v.coords[0];
    }
    const double exp_diag = sin_sq_sum / n / (2.0 * d - 1.0);
    for (int j = 1; j < 2 * d; ++j) {
        const double mean = sum[j] / n;
        const double var = sum_sq[j] / n - mean * mean;
        const double se = std::sqrt(2.0) * var / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
        CHECK(std::abs(var - exp_diag) <= 5.0 * se + 1e-4);
    }
    CHECK(std::abs(cross / n) <= 3.0 * exp_diag / std::sqrt(static_cast<double>(n)) + 1e-4);
}

TEST_CASE("sigma -> 1 concentration: mean deviation 2(1 - sigma)") {
    const double sigma = 0.9999;
    const auto sampler = build_sampler(normal_density(sigma, 4));
    Rng rng(5);
    const long n = 100000;
    double dev = 0.0, dev_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto v = sample_state(sampler, rng);
        const double x = 2.0 - 2.0 * v.coords[0];
        dev += x;
        dev_sq += x * x;
    }
    const double mean = dev / n;
    const double se = std::sqrt((dev_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 2.0 * (1.0 - sigma)) <= 3.0 * se);
}

TEST_CASE("normal(0, d) and uniform(d) samples are statistically indistinguishable") {
    const int d = 4;
    const auto s_n = build_sampler(normal_density(0.0, d));
    const auto s_u = build_sampler(uniform_density(d));
    Rng r1(99), r2(100);
    const long n = 100000;
    double m1 = 0.0, m2 = 0.0, q1 = 0.0, q2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double a = s_n.sample_t(r1);
        const double b = s_u.sample_t(r2);
        m1 += a;
        m2 += b;
        q1 += a * a;
        q2 += b * b;
    }
    const double se = std::sqrt(2.0 / (2.0 * d) / n); // two-sample scale
    CHECK(std::abs(m1 / n - m2 / n) <= 3.0 * se);
    CHECK(std::abs(q1 / n - q2 / n) <= 3.0 * se);
}

TEST_CASE("half-supported custom density builds and samples") {
    // f proportional to the uniform constant on [0, pi/2), zero beyond,
    // normalized so the marginal integrates to 1.
    const int d = 3;
    const double log_s = numerics::log_sphere_surface(2 * d - 2);
    const auto half_mass = numerics::integrate_adaptive(
        [&](double th) {
            return std::exp(log_s + (2.0 * d - 2.0) * std::log(std::sin(th)));
        },
        0.0, kPi / 2, 1e-12);
    const double scale = 1.0 / half_mass.value;
    const auto density = custom_density(
        d, [scale](double th) { return th < kPi / 2 ? scale : 0.0; }, {kPi / 2});
    CHECK(check_normalization(density) < 1e-8);
    const auto sampler = build_sampler(density);
    Rng rng(31);
    for (int i = 0; i < 5000; ++i)
        CHECK(sampler.sample_t(rng) >= -1e-9); // t = cos theta0 >= 0 on the half support
}

TEST_CASE("build_sampler rejects tiny grids") {
    CHECK_THROWS_AS(build_sampler(uniform_density(2), 16), std::domain_error);
}
