#include "isoqec/theory.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "isoqec/numerics.hpp"

namespace isoqec::theory {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2Pi = 1.8378770664093454836;
// Series terms are weighed against the O(1) variance scale, not against the
// (possibly vanishing) partial sum.
constexpr double kSeriesAbsTol = 1e-14;

double mm_cos(const IsotropicDensity &density, double rel_tol) {
    return marginal_moment(density, [](double t) { return std::cos(t); }, rel_tol);
}

double mm_sin_sq(const IsotropicDensity &density, double rel_tol) {
    const double s = marginal_moment(
        density, [](double t) { const double x = std::sin(t); return x * x; }, rel_tol);
    return s;
}

// E[cos(theta0) sin^(2k)(theta0)] under the polar marginal. For large k the
// sin^(2k) factor lives in a window of width ~1/sqrt(k) around pi/2.
double mm_cos_sin_pow(const IsotropicDensity &density, long k, double rel_tol) {
    const double w = 5.0 / std::sqrt(static_cast<double>(k) + 1.0);
    const std::vector<double> extra = {kPi / 2 - w, kPi / 2 - w / 4, kPi / 2 + w / 4,
                                       kPi / 2 + w};
    return marginal_moment(
        density,
        [k](double t) {
            const double s = std::sin(t);
            if (s <= 0.0)
                return 0.0;
            return std::cos(t) * std::exp(2.0 * k * std::log(s));
        },
        rel_tol, extra);
}

// Double-factorial ratio of the corrected-variance series,
//   R_k = (2d-3)!! (2d-2d'+2k-2)!! (2k-3)!! / ((2d-2d'-2)!! (2k)!! (2d+2k-3)!!),
// advanced by recurrence so the d'' = 1 degenerate case (where the quotient
// form would need (-2)!!) falls out as an exact zero. Every factor is
// bounded by 1, so plain doubles are stable.
class SeriesRatio {
  public:
    SeriesRatio(int d, int d_prime)
        : r_(static_cast<double>(d - d_prime) / (2.0 * d - 1.0)), d_(d), dp_(d_prime) {}

    double at(long k) {
        while (k_ < k) {
            r_ *= (2.0 * k_ - 1.0) * (2.0 * (d_ - dp_) + 2.0 * k_) /
                  ((2.0 * k_ + 2.0) * (2.0 * d_ + 2.0 * k_ - 1.0));
            ++k_;
        }
        return r_;
    }

  private:
    double r_;
    long k_ = 1;
    int d_, dp_;
};

} // namespace

double variance_disturbed(const IsotropicDensity &density, double rel_tol) {
    return 2.0 - 2.0 * mm_cos(density, rel_tol);
}

double variance_normal(double sigma) {
    if (sigma < 0.0 || sigma >= 1.0)
        throw std::domain_error("variance_normal: sigma outside [0, 1)");
    return 2.0 * (1.0 - sigma);
}

double variance_disturbed_raw(const IsotropicDensity &density, double rel_tol) {
    const long d = density.d;
    // 4 (2pi)^(d-1) / (2d-3)!!, assembled in log space
    const double log_coef = std::numbers::ln2 * 2.0 + (d - 1) * kLog2Pi -
                            numerics::log_double_factorial(2 * d - 3);
    const double e = ebar(
        density,
        [d](double t) {
            return std::cos(t) * std::pow(std::sin(t), 2.0 * d - 2.0);
        },
        rel_tol);
    return 2.0 - std::exp(log_coef) * e;
}

SecondMoments second_moments(const IsotropicDensity &density, double rel_tol) {
    SecondMoments out;
    out.ex0sq = marginal_moment(
        density, [](double t) { const double c = std::cos(t); return c * c; }, rel_tol);
    out.exjsq = mm_sin_sq(density, rel_tol) / (2.0 * density.d - 1.0);
    out.ealpha0sq = out.ex0sq + out.exjsq;
    out.ealphaksq = 2.0 * out.exjsq;
    return out;
}

SyndromeExpectations syndrome_prob_expectations(const IsotropicDensity &density,
                                                const CodeParams &code, double rel_tol) {
    if (density.d != code.d)
        throw std::invalid_argument("syndrome_prob_expectations: dimension mismatch");
    const double m2 = mm_sin_sq(density, rel_tol);
    SyndromeExpectations out;
    out.e_p0 = 1.0 - 2.0 * (code.d - code.d_prime) / (2.0 * code.d - 1.0) * m2;
    out.e_ps = 2.0 * code.d_prime / (2.0 * code.d - 1.0) * m2;
    return out;
}

CorrectionExpectations correction_expectations(const IsotropicDensity &density,
                                       const CodeParams &code, double rel_tol) {
    if (density.d != code.d)
        throw std::invalid_argument("correction_expectations: dimension mismatch");
    const double m2 = mm_sin_sq(density, rel_tol);
    CorrectionExpectations out;
    out.e1 = 2.0 * (code.d - code.d_prime) / (2.0 * code.d - 1.0) * m2;
    out.e2 = 2.0 * (code.d - 2.0 * code.d_prime) / (2.0 * code.d - 1.0) * m2;
    out.e3 = 0.0;
    const double gap = variance_gap(density, code, rel_tol, 20000, &out.series_terms_used);
    out.e4 = mm_cos(density, rel_tol) - 0.5 * gap;
    return out;
}

double variance_gap(const IsotropicDensity &density, const CodeParams &code,
                    double rel_tol, long k_max, long *terms_used) {
    if (density.d != code.d)
        throw std::invalid_argument("variance_gap: dimension mismatch");
    SeriesRatio ratio(code.d, code.d_prime);
    long used = 0;
    const double series = numerics::sum_series(
        [&](long k) {
            ++used;
            const double r = ratio.at(k);
            if (r == 0.0)
                return 0.0;
            return 2.0 * r * mm_cos_sin_pow(density, k, rel_tol);
        },
        rel_tol, k_max, kSeriesAbsTol);
    if (terms_used)
        *terms_used = used;
    return series;
}

double variance_corrected(const IsotropicDensity &density, const CodeParams &code,
                          double rel_tol, long k_max) {
    return 2.0 - 2.0 * mm_cos(density, rel_tol) +
           variance_gap(density, code, rel_tol, k_max);
}

double variance_corrected_raw(const IsotropicDensity &density, const CodeParams &code,
                              double rel_tol, long k_max) {
    const long d = code.d;
    const long dp = code.d_prime;
    const double log_pref = std::numbers::ln2 * 2.0 + (d - 1) * kLog2Pi -
                            numerics::log_double_factorial(2 * d - 2 * dp - 2);
    const double series = numerics::sum_series(
        [&](long k) {
            const double log_ck =
                numerics::log_double_factorial(2 * k - 3) +
                numerics::log_double_factorial(2 * d - 2 * dp + 2 * k - 2) -
                numerics::log_double_factorial(2 * k) -
                numerics::log_double_factorial(2 * d + 2 * k - 3);
            const double e = ebar(
                density,
                [d, k](double t) {
                    const double s = std::sin(t);
                    if (s <= 0.0)
                        return 0.0;
                    return std::cos(t) * std::exp((2.0 * d + 2.0 * k - 2.0) * std::log(s));
                },
                rel_tol);
            return std::exp(log_pref + log_ck) * e;
        },
        rel_tol, k_max, kSeriesAbsTol);
    return variance_disturbed_raw(density, rel_tol) + series;
}

double fidelity_isotropic(const IsotropicDensity &density, double rel_tol) {
    return std::sqrt(second_moments(density, rel_tol).ealpha0sq);
}

TheoryReport evaluate(const IsotropicDensity &density, const CodeParams &code,
                      double rel_tol, long k_max) {
    TheoryReport r;
    r.rel_tol = rel_tol;
    r.v_disturbed = variance_disturbed(density, rel_tol);
    r.gap = variance_gap(density, code, rel_tol, k_max, &r.series_terms_used);
    r.v_corrected = r.v_disturbed + r.gap;
    const auto se = syndrome_prob_expectations(density, code, rel_tol);
    r.e_p0 = se.e_p0;
    r.e_ps = se.e_ps;
    return r;
}

} // namespace isoqec::theory
