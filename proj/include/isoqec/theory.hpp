#pragma once

#include "isoqec/code_model.hpp"
#include "isoqec/distributions.hpp"

namespace isoqec::theory {

struct SecondMoments {
    double ex0sq = 0.0;     // E[x0^2]
    double exjsq = 0.0;     // E[xj^2], j > 0
    double ealpha0sq = 0.0; // E[|alpha_0|^2]
    double ealphaksq = 0.0; // E[|alpha_k|^2], k > 0
};

struct SyndromeExpectations {
    double e_p0 = 0.0;
    double e_ps = 0.0; // equal for all s > 0
};

struct CorrectionExpectations {
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0; // zero by odd symmetry
    double e4 = 0.0;
    long series_terms_used = 0;
};

struct TheoryReport {
    double v_disturbed = 0.0;
    double v_corrected = 0.0;
    double gap = 0.0;
    long series_terms_used = 0;
    double e_p0 = 0.0;
    double e_ps = 0.0;
    double rel_tol = 0.0;
};

/// V(Psi) = 2 - 2 E[cos theta0], evaluated through the stabilized marginal.
double variance_disturbed(const IsotropicDensity &density, double rel_tol = 1e-10);

/// Closed form for the normal family: 2 (1 - sigma), any d.
double variance_normal(double sigma);

/// Raw prefactor form 2 - 4 (2pi)^(d-1)/(2d-3)!! Ebar[cos sin^(2d-2)],
/// assembled in log space. Small d only; kept as the cross-check for the
/// stabilized route.
double variance_disturbed_raw(const IsotropicDensity &density, double rel_tol = 1e-10);

SecondMoments second_moments(const IsotropicDensity &density, double rel_tol = 1e-10);

SyndromeExpectations syndrome_prob_expectations(const IsotropicDensity &density,
                                                const CodeParams &code,
                                                double rel_tol = 1e-10);

CorrectionExpectations correction_expectations(const IsotropicDensity &density,
                                       const CodeParams &code, double rel_tol = 1e-10);

/// V(Phi~) = V(Psi) + gap series. Series terms decay polynomially with
/// exponent d' + 1/2; k_max bounds the summation.
double variance_corrected(const IsotropicDensity &density, const CodeParams &code,
                          double rel_tol = 1e-10, long k_max = 20000);

/// Raw prefactor form of the corrected variance, small d only.
double variance_corrected_raw(const IsotropicDensity &density, const CodeParams &code,
                              double rel_tol = 1e-10, long k_max = 20000);

/// V(Phi~) - V(Psi), computed directly from the series (never as a
/// difference of two separately rounded variances).
double variance_gap(const IsotropicDensity &density, const CodeParams &code,
                    double rel_tol = 1e-10, long k_max = 20000,
                    long *terms_used = nullptr);

/// F = sqrt(E[x0^2 + x1^2]).
double fidelity_isotropic(const IsotropicDensity &density, double rel_tol = 1e-10);

TheoryReport evaluate(const IsotropicDensity &density, const CodeParams &code,
                      double rel_tol = 1e-10, long k_max = 20000);

} // namespace isoqec::theory
