#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

std::string g_binary;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string &args) {
    const std::string cmd = g_binary + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

std::vector<double> csv_row(const std::string &line) {
    std::vector<double> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ','))
        out.push_back(std::strtod(field.c_str(), nullptr));
    return out;
}

} // namespace

TEST_CASE("exit codes follow the contract") {
    CHECK(run("--version").exit_code == 0);
    CHECK(run("validate").exit_code == 0);
    CHECK(run("validate --inject-fault").exit_code == 3);
    CHECK(run("validate --tol 1e-30").exit_code == 2);
    CHECK(run("").exit_code == 1);                      // missing subcommand
    CHECK(run("nonsense").exit_code == 1);              // unknown subcommand
    CHECK(run("density --points 1").exit_code == 1);
    CHECK(run("variance --sigma 0.5 --n 2 --m 2 --samples 1000").exit_code == 1);
    CHECK(run("sweep --codes 5,5 --samples 1000").exit_code == 1);
    CHECK(run("sweep --codes garbage --samples 1000").exit_code == 1);
    CHECK(run("uniformity --syndrome 0 --samples 1000").exit_code == 1);
    // conditioning starves at sigma near 1 with few samples
    CHECK(run("uniformity --sigma 0.999 --n 3 --m 1 --syndrome 1 --samples 1000").exit_code ==
          2);
}

TEST_CASE("validate lists per-check status") {
    const auto r = run("validate");
    CHECK(r.exit_code == 0);
    const auto ls = lines(r.out);
    long ok_lines = 0;
    for (const auto &l : ls)
        if (l.rfind("ok   ", 0) == 0)
            ++ok_lines;
    CHECK(ok_lines >= 40);
    CHECK(ls.back().find("checks passed") != std::string::npos);
}

TEST_CASE("seeded runs are byte-identical") {
    const std::string var_cmd = "variance --sigma 0.5 --n 2 --m 1 --samples 20000 --seed 42";
    const auto a = run(var_cmd);
    const auto b = run(var_cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    const std::string sweep_cmd =
        "sweep --sigma-list 0.3,0.7 --codes 2,1 --samples 20000 --seed 7";
    const auto c = run(sweep_cmd);
    const auto d = run(sweep_cmd);
    CHECK(c.exit_code == 0);
    CHECK(c.out == d.out);
    // a different seed changes the Monte Carlo columns
    const auto e = run("sweep --sigma-list 0.3,0.7 --codes 2,1 --samples 20000 --seed 8");
    CHECK(c.out != e.out);
}

TEST_CASE("density output shape") {
    const auto flat = run("density --sigma 0 --n 3 --points 17");
    CHECK(flat.exit_code == 0);
    auto ls = lines(flat.out);
    REQUIRE(ls.size() == 19); // comment + header + 17 rows
    CHECK(ls[0].rfind("# isoqec", 0) == 0);
    CHECK(ls[1] == "theta,f");
    // sigma = 0 is the uniform density: constant f column
    const double f0 = csv_row(ls[2])[1];
    for (std::size_t i = 2; i < ls.size(); ++i)
        CHECK(csv_row(ls[i])[1] == doctest::Approx(f0).epsilon(1e-12));

    // concentrated density decreases in theta
    const auto peaked = run("density --sigma 0.9 --n 3 --points 17");
    ls = lines(peaked.out);
    double prev = csv_row(ls[2])[1];
    for (std::size_t i = 3; i < ls.size(); ++i) {
        const double cur = csv_row(ls[i])[1];
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("variance worked example: V(Psi) theory column is 2(1 - sigma)") {
    const auto r = run("variance --sigma 0.5 --n 2 --m 1 --samples 20000 --seed 42");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() >= 3);
    const auto row = csv_row(ls[2]);
    REQUIRE(row.size() == 12);
    CHECK(row[3] == doctest::Approx(1.0).epsilon(1e-8));  // v_psi_theory
    CHECK(row[10] == doctest::Approx(0.625).epsilon(1e-8)); // e_p0_theory
}

TEST_CASE("sweep CSV schema and the sigma = 0 limit") {
    const auto r = run("sweep --sigma-list 0 --codes \"2,1;3,1\" --samples 20000 --seed 3");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 5); // comment + header + 2 rows + min-gap comment
    CHECK(ls[1] == "sigma,n,m,v_psi_theory,v_psi_mc,v_psi_se,v_corr_theory,v_corr_mc,"
                   "v_corr_se,gap_theory,e_p0_theory,e_p0_mc");
    for (std::size_t i = 2; i <= 3; ++i) {
        const auto row = csv_row(ls[i]);
        REQUIRE(row.size() == 12);
        CHECK(row[3] == doctest::Approx(2.0).epsilon(1e-8)); // uniform variance
        CHECK(std::abs(row[9]) < 1e-9);                      // gap vanishes
    }
    CHECK(ls[4].rfind("# min gap", 0) == 0);
}

int main(int argc, char **argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <isoqec-binary>\n");
        return 1;
    }
    g_binary = argv[1];
    doctest::Context context;
    context.applyCommandLine(argc - 1, argv + 1);
    return context.run();
}
