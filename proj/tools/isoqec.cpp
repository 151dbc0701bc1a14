#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "isoqec/experiments.hpp"
#include "isoqec/numerics.hpp"
#include "isoqec/theory.hpp"

namespace {

constexpr const char *kVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

// exit-code contract, stable for scripting
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void apply_threads(int threads) {
    if (threads <= 0) {
        if (const char *env = std::getenv("ISOQEC_THREADS"))
            threads = std::atoi(env);
    }
    if (threads > 0)
        omp_set_num_threads(threads);
}

struct CheckRunner {
    std::ostream &out;
    int total = 0;
    int failed = 0;

    void check(const std::string &name, double got, double want, double tol) {
        ++total;
        const double scale = std::max({std::abs(got), std::abs(want), 1.0});
        const bool ok = std::abs(got - want) <= tol * scale;
        if (!ok)
            ++failed;
        out << (ok ? "ok   " : "FAIL ") << name << "  got=" << fmt(got)
            << " want=" << fmt(want) << "\n";
    }
};

int cmd_validate(double tol, bool inject_fault) {
    using namespace isoqec;
    namespace num = isoqec::numerics;
    CheckRunner r{std::cout};

    // double factorials and Wallis integrals against first principles
    r.check("double_factorial(-1)", num::double_factorial(-1).value(), 1.0, tol);
    r.check("double_factorial(7)", num::double_factorial(7).value(),
            inject_fault ? 106.0 : 105.0, tol);
    r.check("wallis(0)", num::wallis_integral(0), kPi, tol);
    r.check("wallis(1)", num::wallis_integral(1), 2.0, tol);
    r.check("wallis(2)", num::wallis_integral(2), kPi / 2, tol);
    r.check("wallis(3)", num::wallis_integral(3), 4.0 / 3.0, tol);
    for (int k = 0; k <= 8; k += 2)
        r.check("wallis telescoping k=" + std::to_string(k),
                num::wallis_integral(k) * num::wallis_integral(k + 1), 2.0 * kPi / (k + 1),
                tol);

    // closed-form kernel integrals against adaptive quadrature
    for (int d : {2, 4}) {
        for (double sigma : {0.5, 0.9}) {
            const auto kern = [sigma, d](double t) {
                return std::pow(1.0 + sigma * sigma - 2.0 * sigma * std::cos(t),
                                static_cast<double>(d));
            };
            const auto quad = [&](auto numerator) {
                const auto res = num::integrate_adaptive(
                    [&](double t) { return numerator(t) / kern(t); }, 0.0, kPi, tol);
                // the quadrature accepts roundoff-limited results; the
                // requested tolerance may still be unreachable
                if (res.error_estimate > tol * std::abs(res.value))
                    throw num::numerical_error("validate: quadrature cannot reach tol",
                                               res.value);
                return res.value;
            };
            const std::string tag =
                " d=" + std::to_string(d) + " sigma=" + fmt(sigma);
            r.check("kernel plain" + tag, num::kernel_integral(num::KernelKind::plain, d, sigma),
                    quad([d](double t) { return std::pow(std::sin(t), 2.0 * d - 2.0); }), tol);
            r.check("kernel cos" + tag, num::kernel_integral(num::KernelKind::cos, d, sigma),
                    quad([d](double t) {
                        return std::cos(t) * std::pow(std::sin(t), 2.0 * d - 2.0);
                    }),
                    tol);
            r.check("kernel sin2d" + tag, num::kernel_integral(num::KernelKind::sin2d, d, sigma),
                    quad([d](double t) { return std::pow(std::sin(t), 2.0 * d); }), tol);
            r.check("kernel cos2" + tag, num::kernel_integral(num::KernelKind::cos2, d, sigma),
                    quad([d](double t) {
                        return std::cos(t) * std::cos(t) *
                               std::pow(std::sin(t), 2.0 * d - 2.0);
                    }),
                    tol);
        }
    }

    // sphere surface shell recursion
    double max_shell_err = 0.0;
    for (int dim = 2; dim <= 25; ++dim) {
        const double lhs = num::sphere_surface(dim).value();
        const double rhs = num::sphere_surface(dim - 1).value() * num::wallis_integral(dim - 1);
        max_shell_err = std::max(max_shell_err, std::abs(lhs - rhs) / rhs);
    }
    r.check("sphere shell recursion dim<=25 (max rel err)", max_shell_err, 0.0, tol);

    // density normalization
    for (double sigma : {0.0, 0.5, 0.9})
        for (int d : {4, 8})
            r.check("normalization sigma=" + fmt(sigma) + " d=" + std::to_string(d),
                    check_normalization(normal_density(sigma, d), tol), 0.0,
                    std::max(tol, 1e-8));

    // disturbed-state variance closed form, including the log-space path
    for (double sigma : {0.25, 0.75})
        for (int d : {8, 256})
            r.check("variance sigma=" + fmt(sigma) + " d=" + std::to_string(d),
                    theory::variance_disturbed(normal_density(sigma, d), tol),
                    2.0 * (1.0 - sigma), std::max(tol, 1e-8));

    // expected syndrome probability identities
    for (std::pair<int, int> nm : {std::pair{2, 1}, {3, 2}}) {
        const auto code = CodeParams::make(nm.first, nm.second);
        const auto se =
            theory::syndrome_prob_expectations(normal_density(0.5, code.d), code, tol);
        const std::string tag =
            " (" + std::to_string(nm.first) + "," + std::to_string(nm.second) + ")";
        r.check("e_p0 closed form" + tag, se.e_p0,
                1.0 - (code.d_sec - 1.0) / code.d_sec * 0.75, std::max(tol, 1e-8));
        r.check("syndrome simplex" + tag, se.e_p0 + (code.d_sec - 1.0) * se.e_ps, 1.0,
                std::max(tol, 1e-9));
    }

    r.check("marginal E[cos] = sigma",
            marginal_moment(normal_density(0.6, 8), [](double t) { return std::cos(t); },
                            tol),
            0.6, std::max(tol, 1e-8));
    const double f = theory::fidelity_isotropic(normal_density(0.5, 8), tol);
    r.check("fidelity closed form", f * f, (1.0 + 7.0 * 0.25) / 8.0, std::max(tol, 1e-8));

    std::cout << r.total - r.failed << "/" << r.total << " checks passed\n";
    return r.failed == 0 ? kExitOk : kExitValidation;
}

int cmd_density(std::ostream &out, double sigma, int n, int points) {
    using namespace isoqec;
    const auto density = normal_density(sigma, 1 << n);
    out << "# isoqec " << kVersion << " density sigma=" << fmt(sigma) << " n=" << n
        << " points=" << points << "\n";
    out << "theta,f\n";
    for (int i = 0; i < points; ++i) {
        const double theta = kPi * i / (points - 1);
        out << fmt(theta) << "," << fmt(density.density(theta)) << "\n";
    }
    return kExitOk;
}

void write_row(std::ostream &out, const isoqec::experiments::SweepRow &row) {
    out << fmt(row.sigma) << "," << row.n << "," << row.m << "," << fmt(row.v_psi_theory)
        << "," << fmt(row.v_psi_mc) << "," << fmt(row.v_psi_se) << ","
        << fmt(row.v_corr_theory) << "," << fmt(row.v_corr_mc) << "," << fmt(row.v_corr_se)
        << "," << fmt(row.gap_theory) << "," << fmt(row.e_p0_theory) << ","
        << fmt(row.e_p0_mc);
    if (!row.ok)
        out << ",# error: " << row.error;
    out << "\n";
}

constexpr const char *kSweepHeader = "sigma,n,m,v_psi_theory,v_psi_mc,v_psi_se,"
                                     "v_corr_theory,v_corr_mc,v_corr_se,gap_theory,"
                                     "e_p0_theory,e_p0_mc";

int cmd_variance(double sigma, int n, int m, long samples, std::uint64_t seed) {
    using namespace isoqec;
    const auto code = CodeParams::make(n, m);
    const auto rows = experiments::sweep({sigma}, {code}, samples, seed);
    const auto &row = rows.front();
    if (!row.ok) {
        std::cerr << "error: " << row.error << "\n";
        return kExitNumerical;
    }
    std::cout << "# isoqec " << kVersion << " variance sigma=" << fmt(sigma) << " n=" << n
              << " m=" << m << " samples=" << samples << " seed=" << seed << "\n";
    std::cout << kSweepHeader << "\n";
    write_row(std::cout, row);

    const auto density = normal_density(sigma, code.d);
    const auto sampled = experiments::mc_variance_corrected(
        density, code, samples, seed, experiments::Estimator::sampled);
    const auto se = theory::syndrome_prob_expectations(density, code);
    std::cout << "\n";
    std::cout << "V(Psi)    theory " << fmt(row.v_psi_theory) << "  mc " << fmt(row.v_psi_mc)
              << " +/- " << fmt(row.v_psi_se) << "\n";
    std::cout << "V(Phi~)   theory " << fmt(row.v_corr_theory) << "  rao-blackwell "
              << fmt(row.v_corr_mc) << " +/- " << fmt(row.v_corr_se) << "  sampled "
              << fmt(sampled.mean) << " +/- " << fmt(sampled.std_error) << "\n";
    std::cout << "gap       theory " << fmt(row.gap_theory) << "\n";
    std::cout << "E[P_0]    " << fmt(se.e_p0) << "   E[P_s>0] " << fmt(se.e_ps) << "\n";
    return kExitOk;
}

std::vector<isoqec::CodeParams> parse_codes(const std::string &spec) {
    std::vector<isoqec::CodeParams> codes;
    std::istringstream pairs(spec);
    std::string pair;
    while (std::getline(pairs, pair, ';')) {
        int n = 0, m = 0;
        char comma = 0;
        std::istringstream in(pair);
        if (!(in >> n >> comma >> m) || comma != ',')
            throw std::invalid_argument("bad code spec '" + pair + "', expected n,m");
        codes.push_back(isoqec::CodeParams::make(n, m));
    }
    if (codes.empty())
        throw std::invalid_argument("empty code list");
    return codes;
}

int cmd_sweep(const std::vector<double> &sigmas, const std::string &code_spec, long samples,
              std::uint64_t seed, const std::string &out_path) {
    using namespace isoqec;
    const auto codes = parse_codes(code_spec);
    const auto rows = experiments::sweep(sigmas, codes, samples, seed);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return kExitUsage;
        }
    }
    std::ostream &out = out_path.empty() ? std::cout : file;

    out << "# isoqec " << kVersion << " sweep codes=" << code_spec
        << " samples=" << samples << " seed=" << seed << " sigma-list=";
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        out << (i ? "," : "") << fmt(sigmas[i]);
    out << "\n" << kSweepHeader << "\n";

    bool all_ok = true;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto &row : rows) {
        write_row(out, row);
        all_ok = all_ok && row.ok;
        if (row.ok)
            min_gap = std::min(min_gap, row.gap_theory);
    }
    out << "# min gap over grid: " << fmt(min_gap) << "\n";
    return all_ok ? kExitOk : kExitNumerical;
}

int cmd_uniformity(double sigma, int n, int m, int syndrome, long samples,
                   std::uint64_t seed) {
    using namespace isoqec;
    const auto code = CodeParams::make(n, m);
    if (syndrome <= 0 || syndrome >= code.d_sec) {
        std::cerr << "error: syndrome must satisfy 0 < s < " << code.d_sec << "\n";
        return kExitUsage;
    }
    const auto r = experiments::mc_uniformity_test(normal_density(sigma, code.d), code,
                                                   syndrome, samples, seed);
    std::cout << "# isoqec " << kVersion << " uniformity sigma=" << fmt(sigma) << " n=" << n
              << " m=" << m << " syndrome=" << syndrome << " samples=" << samples
              << " seed=" << seed << "\n";
    std::cout << "hits " << r.n_hits << " of " << samples << "\n";
    std::cout << "E[x0]   " << fmt(r.moment1.mean) << " +/- " << fmt(r.moment1.std_error)
              << "  target 0\n";
    std::cout << "E[x0^2] " << fmt(r.moment2.mean) << " +/- " << fmt(r.moment2.std_error)
              << "  target " << fmt(r.target2) << "\n";
    std::cout << (r.pass ? "PASS" : "FAIL") << " (3 SE bands)\n";
    return r.pass ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"numerical laboratory for syndrome correction of isotropic errors"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (env ISOQEC_THREADS)");

    auto *validate = app.add_subcommand("validate", "run the closed-form identity suite");
    double v_tol = 1e-9;
    bool inject_fault = false;
    validate->add_option("--tol", v_tol, "relative tolerance for every check");
    validate->add_flag("--inject-fault", inject_fault)->group(""); // negative control

    auto *density = app.add_subcommand("density", "tabulate the error density on [0, pi]");
    double d_sigma = 0.5;
    int d_n = 3, d_points = 128;
    density->add_option("--sigma", d_sigma)->check(CLI::Range(0.0, 1.0));
    density->add_option("--n", d_n)->check(CLI::Range(1, 20));
    density->add_option("--points", d_points)->check(CLI::Range(2, 1000000));

    auto *variance = app.add_subcommand("variance", "theory vs Monte Carlo for one point");
    double x_sigma = 0.5;
    int x_n = 3, x_m = 1;
    long x_samples = 100000;
    std::uint64_t x_seed = 1;
    variance->add_option("--sigma", x_sigma)->check(CLI::Range(0.0, 1.0));
    variance->add_option("--n", x_n);
    variance->add_option("--m", x_m);
    variance->add_option("--samples", x_samples);
    variance->add_option("--seed", x_seed);

    auto *sweep = app.add_subcommand("sweep", "grid of (sigma, code) points, CSV out");
    std::vector<double> s_sigmas{0.1, 0.3, 0.5, 0.7, 0.9};
    std::string s_codes = "2,1;3,1;3,2";
    long s_samples = 100000;
    std::uint64_t s_seed = 1;
    std::string s_out;
    sweep->add_option("--sigma-list", s_sigmas)->delimiter(',');
    sweep->add_option("--codes", s_codes, "semicolon-separated n,m pairs");
    sweep->add_option("--samples", s_samples);
    sweep->add_option("--seed", s_seed);
    sweep->add_option("--out", s_out, "output file (default stdout)");

    auto *uniformity = app.add_subcommand("uniformity", "polar-moment test on one syndrome");
    double u_sigma = 0.7;
    int u_n = 3, u_m = 1, u_syndrome = 1;
    long u_samples = 1000000;
    std::uint64_t u_seed = 1;
    uniformity->add_option("--sigma", u_sigma)->check(CLI::Range(0.0, 1.0));
    uniformity->add_option("--n", u_n);
    uniformity->add_option("--m", u_m);
    uniformity->add_option("--syndrome", u_syndrome);
    uniformity->add_option("--samples", u_samples);
    uniformity->add_option("--seed", u_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }
    apply_threads(threads);

    try {
        if (validate->parsed())
            return cmd_validate(v_tol, inject_fault);
        if (density->parsed())
            return cmd_density(std::cout, d_sigma, d_n, d_points);
        if (variance->parsed())
            return cmd_variance(x_sigma, x_n, x_m, x_samples, x_seed);
        if (sweep->parsed())
            return cmd_sweep(s_sigmas, s_codes, s_samples, s_seed, s_out);
        if (uniformity->parsed())
            return cmd_uniformity(u_sigma, u_n, u_m, u_syndrome, u_samples, u_seed);
    } catch (const isoqec::numerics::numerical_error &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const isoqec::experiments::insufficient_samples &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
