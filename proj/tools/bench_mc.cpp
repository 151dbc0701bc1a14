#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "isoqec/experiments.hpp"

// Times the Rao-Blackwellized corrected-variance estimator in serial and
// OpenMP mode on the same seed and checks the results are bit-identical.

namespace {

double run_once(isoqec::experiments::ExecMode mode, const isoqec::IsotropicDensity &density,
                const isoqec::CodeParams &code, long n, double *mean_out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = isoqec::experiments::mc_variance_corrected(
        density, code, n, 42, isoqec::experiments::Estimator::rao_blackwell, mode);
    const auto t1 = std::chrono::steady_clock::now();
    *mean_out = r.mean;
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char **argv) {
    using namespace isoqec;
    long n = 2000000;
    if (argc > 1)
        n = std::atol(argv[1]);

    const auto density = normal_density(0.5, 8);
    const auto code = CodeParams::make(3, 1);

    double mean_serial = 0.0, mean_parallel = 0.0;
    const double t_serial =
        run_once(experiments::ExecMode::serial, density, code, n, &mean_serial);
    const double t_parallel =
        run_once(experiments::ExecMode::parallel, density, code, n, &mean_parallel);

    std::printf("samples             %ld\n", n);
    std::printf("threads             %d\n", omp_get_max_threads());
    std::printf("serial              %.3f s  (%.2f Msamples/s)\n", t_serial,
                n / t_serial / 1e6);
    std::printf("parallel            %.3f s  (%.2f Msamples/s)\n", t_parallel,
                n / t_parallel / 1e6);
    std::printf("speedup             %.2fx\n", t_serial / t_parallel);
    std::printf("bit-identical       %s\n", mean_serial == mean_parallel ? "yes" : "NO");
    return mean_serial == mean_parallel ? 0 : 1;
}
