#include "isoqec/experiments.hpp"

#include <cmath>
#include <sstream>

#include "isoqec/numerics.hpp"
#include "isoqec/theory.hpp"

namespace isoqec::experiments {

namespace {

constexpr long kChunkSize = 4096;

/// Runs worker(rng, chunk_sample_count) once per chunk, each chunk on its
/// own substream, and returns the per-chunk results in chunk order.
template <class Result, class Worker>
std::vector<Result> run_chunks(long n_samples, std::uint64_t seed, ExecMode mode,
                               const Worker &worker) {
    const long n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
    std::vector<Result> results(static_cast<std::size_t>(n_chunks));
    if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long c = 0; c < n_chunks; ++c) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(c));
            const long count = std::min(kChunkSize, n_samples - c * kChunkSize);
            results[static_cast<std::size_t>(c)] = worker(rng, count);
        }
    } else {
        for (long c = 0; c < n_chunks; ++c) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(c));
            const long count = std::min(kChunkSize, n_samples - c * kChunkSize);
            results[static_cast<std::size_t>(c)] = worker(rng, count);
        }
    }
    return results;
}

struct MomentSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

/// Scalar per-sample statistic -> mean and standard error.
template <class PerSample>
EstimateReport estimate_scalar(const IsotropicDensity &density, long n_samples,
                               std::uint64_t seed, ExecMode mode, Estimator est,
                               const PerSample &per_sample) {
    if (n_samples < 100)
        throw std::invalid_argument("monte carlo estimate: n_samples < 100");
    const Theta0Sampler sampler = build_sampler(density);
    const auto chunks = run_chunks<MomentSums>(
        n_samples, seed, mode, [&](Rng &rng, long count) {
            MomentSums acc;
            for (long i = 0; i < count; ++i) {
                const double v = per_sample(sampler, rng);
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            return acc;
        });
    MomentSums total;
    for (const auto &c : chunks) {
        total.sum += c.sum;
        total.sum_sq += c.sum_sq;
    }
    EstimateReport r;
    r.n_samples = n_samples;
    r.seed = seed;
    r.estimator = est;
    r.mean = total.sum / n_samples;
    const double var = std::max(0.0, total.sum_sq / n_samples - r.mean * r.mean);
    r.std_error = std::sqrt(var / n_samples);
    return r;
}

} // namespace

EstimateReport mc_variance_disturbed(const IsotropicDensity &density, long n_samples,
                                     std::uint64_t seed, ExecMode mode) {
    return estimate_scalar(density, n_samples, seed, mode, Estimator::sampled,
                           [](const Theta0Sampler &s, Rng &rng) {
                               return deviation_sq(sample_state(s, rng));
                           });
}

EstimateReport mc_quantum_variance(const IsotropicDensity &density, long n_samples,
                                   std::uint64_t seed, ExecMode mode) {
    return estimate_scalar(density, n_samples, seed, mode, Estimator::sampled,
                           [](const Theta0Sampler &s, Rng &rng) {
                               return phase_deviation_sq(sample_state(s, rng));
                           });
}

EstimateReport mc_variance_corrected(const IsotropicDensity &density, const CodeParams &code,
                                     long n_samples, std::uint64_t seed, Estimator estimator,
                                     ExecMode mode) {
    if (density.d != code.d)
        throw std::invalid_argument("mc_variance_corrected: dimension mismatch");
    if (estimator == Estimator::sampled) {
        return estimate_scalar(density, n_samples, seed, mode, estimator,
                               [&code](const Theta0Sampler &s, Rng &rng) {
                                   const auto outcome =
                                       measure_and_correct(sample_state(s, rng), code, rng);
                                   return deviation_sq(outcome.corrected);
                               });
    }
    // Rao-Blackwell: exact average over all branches, weighted by P_s.
    return estimate_scalar(density, n_samples, seed, mode, estimator,
                           [&code](const Theta0Sampler &s, Rng &rng) {
                               const auto branches =
                                   correct_all_branches(sample_state(s, rng), code);
                               double acc = 0.0;
                               for (const auto &b : branches)
                                   if (!b.zero_branch)
                                       acc += b.probability * deviation_sq(b.corrected);
                               return acc;
                           });
}

std::vector<EstimateReport> mc_syndrome_probs(const IsotropicDensity &density,
                                              const CodeParams &code, long n_samples,
                                              std::uint64_t seed, ExecMode mode) {
    if (density.d != code.d)
        throw std::invalid_argument("mc_syndrome_probs: dimension mismatch");
    if (n_samples < 100)
        throw std::invalid_argument("mc_syndrome_probs: n_samples < 100");
    const Theta0Sampler sampler = build_sampler(density);
    struct Sums {
        std::vector<double> sum, sum_sq;
    };
    const auto chunks = run_chunks<Sums>(n_samples, seed, mode, [&](Rng &rng, long count) {
        Sums acc{std::vector<double>(code.d_sec, 0.0), std::vector<double>(code.d_sec, 0.0)};
        for (long i = 0; i < count; ++i) {
            const auto probs = syndrome_probabilities(sample_state(sampler, rng), code);
            for (int s = 0; s < code.d_sec; ++s) {
                acc.sum[s] += probs[s];
                acc.sum_sq[s] += probs[s] * probs[s];
            }
        }
        return acc;
    });
    std::vector<EstimateReport> out(code.d_sec);
    for (int s = 0; s < code.d_sec; ++s) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto &c : chunks) {
            sum += c.sum[s];
            sum_sq += c.sum_sq[s];
        }
        out[s].n_samples = n_samples;
        out[s].seed = seed;
        out[s].estimator = Estimator::rao_blackwell;
        out[s].mean = sum / n_samples;
        const double var = std::max(0.0, sum_sq / n_samples - out[s].mean * out[s].mean);
        out[s].std_error = std::sqrt(var / n_samples);
    }
    return out;
}

UniformityReport mc_uniformity_test(const IsotropicDensity &density, const CodeParams &code,
                                    int syndrome, long n_samples, std::uint64_t seed,
                                    ExecMode mode) {
    if (density.d != code.d)
        throw std::invalid_argument("mc_uniformity_test: dimension mismatch");
    if (syndrome <= 0 || syndrome >= code.d_sec)
        throw std::invalid_argument("mc_uniformity_test: syndrome must satisfy 0 < s < d''");
    const Theta0Sampler sampler = build_sampler(density);
    struct Sums {
        long hits = 0;
        double x1 = 0.0, x2 = 0.0, x4 = 0.0; // powers of corrected x0
    };
    const auto chunks = run_chunks<Sums>(n_samples, seed, mode, [&](Rng &rng, long count) {
        Sums acc;
        for (long i = 0; i < count; ++i) {
            const auto outcome = measure_and_correct(sample_state(sampler, rng), code, rng);
            if (outcome.syndrome != syndrome)
                continue;
            const double x0 = outcome.corrected.coords[0];
            ++acc.hits;
            acc.x1 += x0;
            acc.x2 += x0 * x0;
            acc.x4 += x0 * x0 * x0 * x0;
        }
        return acc;
    });
    Sums total;
    for (const auto &c : chunks) {
        total.hits += c.hits;
        total.x1 += c.x1;
        total.x2 += c.x2;
        total.x4 += c.x4;
    }
    if (total.hits < 100) {
        std::ostringstream msg;
        msg << "mc_uniformity_test: only " << total.hits << " hits on syndrome " << syndrome
            << " out of " << n_samples << " samples";
        throw insufficient_samples(msg.str());
    }

    UniformityReport r;
    r.syndrome = syndrome;
    r.n_hits = total.hits;
    const double n = static_cast<double>(total.hits);
    r.moment1 = {total.x1 / n,
                 std::sqrt(std::max(0.0, total.x2 / n - (total.x1 / n) * (total.x1 / n)) / n),
                 total.hits, seed, Estimator::sampled};
    const double m2 = total.x2 / n;
    r.moment2 = {m2, std::sqrt(std::max(0.0, total.x4 / n - m2 * m2) / n), total.hits, seed,
                 Estimator::sampled};
    r.target2 = 1.0 / (2.0 * code.d_prime);
    r.pass = std::abs(r.moment1.mean) <= 3.0 * r.moment1.std_error &&
             std::abs(r.moment2.mean - r.target2) <= 3.0 * r.moment2.std_error;
    return r;
}

std::vector<SweepRow> sweep(const std::vector<double> &sigma_list,
                            const std::vector<CodeParams> &code_list, long n_samples,
                            std::uint64_t seed, double rel_tol, ExecMode mode) {
    if (sigma_list.empty() || code_list.empty())
        throw std::invalid_argument("sweep: empty sigma or code list");
    std::vector<SweepRow> rows;
    std::uint64_t row_seed = seed;
    for (const auto &code : code_list) {
        for (double sigma : sigma_list) {
            SweepRow row;
            row.sigma = sigma;
            row.n = code.n;
            row.m = code.m;
            // distinct substream per row, fixed by grid position
            const std::uint64_t rs = row_seed++;
            try {
                const auto density = normal_density(sigma, code.d);
                row.v_psi_theory = theory::variance_disturbed(density, rel_tol);
                row.gap_theory = theory::variance_gap(density, code, rel_tol);
                row.v_corr_theory = row.v_psi_theory + row.gap_theory;
                row.e_p0_theory =
                    theory::syndrome_prob_expectations(density, code, rel_tol).e_p0;
                const auto vd = mc_variance_disturbed(density, n_samples, rs, mode);
                row.v_psi_mc = vd.mean;
                row.v_psi_se = vd.std_error;
                const auto vc = mc_variance_corrected(density, code, n_samples, rs,
                                                      Estimator::rao_blackwell, mode);
                row.v_corr_mc = vc.mean;
                row.v_corr_se = vc.std_error;
                row.e_p0_mc = mc_syndrome_probs(density, code, n_samples, rs, mode)[0].mean;
            } catch (const std::exception &e) {
                row.ok = false;
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace isoqec::experiments
