#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "isoqec/code_model.hpp"
#include "isoqec/distributions.hpp"

namespace isoqec::experiments {

/// Serial runs the chunk loop on one thread; parallel distributes chunks
/// over OpenMP threads. Both reduce per-chunk partials in chunk order, so
/// results are bit-identical between the two modes and across thread counts.
enum class ExecMode { serial, parallel };

enum class Estimator { sampled, rao_blackwell };

struct EstimateReport {
    double mean = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    std::uint64_t seed = 0;
    Estimator estimator = Estimator::sampled;
};

struct UniformityReport {
    int syndrome = 0;
    long n_hits = 0;
    EstimateReport moment1; // E[cos theta0] on the corrected sphere, target 0
    EstimateReport moment2; // E[cos^2 theta0], target 1/(2d')
    double target2 = 0.0;
    bool pass = false;
};

struct SweepRow {
    double sigma = 0.0;
    int n = 0;
    int m = 0;
    double v_psi_theory = 0.0;
    double v_psi_mc = 0.0;
    double v_psi_se = 0.0;
    double v_corr_theory = 0.0;
    double v_corr_mc = 0.0;
    double v_corr_se = 0.0;
    double gap_theory = 0.0;
    double e_p0_theory = 0.0;
    double e_p0_mc = 0.0;
    bool ok = true;
    std::string error;
};

/// Thrown by the uniformity test when conditioning leaves fewer than 100
/// hits on the requested syndrome.
class insufficient_samples : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

EstimateReport mc_variance_disturbed(const IsotropicDensity &density, long n_samples,
                                     std::uint64_t seed,
                                     ExecMode mode = ExecMode::parallel);

EstimateReport mc_variance_corrected(const IsotropicDensity &density, const CodeParams &code,
                                     long n_samples, std::uint64_t seed,
                                     Estimator estimator = Estimator::rao_blackwell,
                                     ExecMode mode = ExecMode::parallel);

/// Per-syndrome mean of P_s; Rao-Blackwellized (exact P_s per sample, no
/// syndrome sampling). Estimates sum to 1 exactly per sample.
std::vector<EstimateReport> mc_syndrome_probs(const IsotropicDensity &density,
                                              const CodeParams &code, long n_samples,
                                              std::uint64_t seed,
                                              ExecMode mode = ExecMode::parallel);

/// Conditions on measured syndrome == s (s > 0) and tests the first two
/// polar moments of the corrected state against the uniform-on-sphere
/// targets 0 and 1/(2d') at 3 standard errors.
UniformityReport mc_uniformity_test(const IsotropicDensity &density, const CodeParams &code,
                                    int syndrome, long n_samples, std::uint64_t seed,
                                    ExecMode mode = ExecMode::parallel);

EstimateReport mc_quantum_variance(const IsotropicDensity &density, long n_samples,
                                   std::uint64_t seed, ExecMode mode = ExecMode::parallel);

/// One row per (sigma, code) pair. Rows that fail numerically carry an
/// error marker; the sweep continues.
std::vector<SweepRow> sweep(const std::vector<double> &sigma_list,
                            const std::vector<CodeParams> &code_list, long n_samples,
                            std::uint64_t seed, double rel_tol = 1e-10,
                            ExecMode mode = ExecMode::parallel);

} // namespace isoqec::experiments
