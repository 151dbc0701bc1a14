#include "isoqec/code_model.hpp"

#include <cmath>
#include <stdexcept>

namespace isoqec {

CodeParams CodeParams::make(int n, int m) {
    if (m < 1 || m >= n)
        throw std::invalid_argument("CodeParams: need 1 <= m < n");
    if (n > 20)
        throw std::invalid_argument("CodeParams: n too large");
    CodeParams c;
    c.n = n;
    c.m = m;
    c.d = 1 << n;
    c.d_prime = 1 << m;
    c.d_sec = 1 << (n - m);
    return c;
}

namespace {
void check_dims(const StateVector &psi, const CodeParams &code) {
    if (psi.d != code.d || psi.coords.size() != 2 * static_cast<std::size_t>(code.d))
        throw std::invalid_argument("state dimension does not match code");
}
} // namespace

std::vector<double> syndrome_probabilities(const StateVector &psi, const CodeParams &code) {
    check_dims(psi, code);
    std::vector<double> probs(code.d_sec, 0.0);
    for (int s = 0; s < code.d_sec; ++s) {
        double p = 0.0;
        const std::size_t base = 2 * static_cast<std::size_t>(s) * code.d_prime;
        for (std::size_t j = 0; j < 2 * static_cast<std::size_t>(code.d_prime); ++j) {
            const double x = psi.coords[base + j];
            p += x * x;
        }
        probs[s] = p;
    }
    return probs;
}

std::vector<CorrectionOutcome> correct_all_branches(const StateVector &psi,
                                                    const CodeParams &code) {
    check_dims(psi, code);
    const auto probs = syndrome_probabilities(psi, code);
    std::vector<CorrectionOutcome> out(code.d_sec);
    for (int s = 0; s < code.d_sec; ++s) {
        out[s].syndrome = s;
        out[s].probability = probs[s];
        if (probs[s] == 0.0) {
            out[s].zero_branch = true;
            continue;
        }
        const double inv_norm = 1.0 / std::sqrt(probs[s]);
        const std::size_t base = 2 * static_cast<std::size_t>(s) * code.d_prime;
        StateVector c;
        c.d = code.d_prime;
        c.coords.resize(2 * static_cast<std::size_t>(code.d_prime));
        for (std::size_t j = 0; j < c.coords.size(); ++j)
            c.coords[j] = psi.coords[base + j] * inv_norm;
        out[s].corrected = std::move(c);
    }
    return out;
}

CorrectionOutcome measure_and_correct(const StateVector &psi, const CodeParams &code,
                                      Rng &rng) {
    auto branches = correct_all_branches(psi, code);
    const double u = rng.uniform();
    double acc = 0.0;
    for (auto &b : branches) {
        acc += b.probability;
        if (u < acc)
            return std::move(b);
    }
    // rounding pushed the cumulative sum just below u: last nonzero branch
    for (auto it = branches.rbegin(); it != branches.rend(); ++it)
        if (!it->zero_branch)
            return std::move(*it);
    throw std::logic_error("measure_and_correct: all branches have zero probability");
}

StateVector embed_logical(const StateVector &logical, int syndrome, const CodeParams &code) {
    if (syndrome < 0 || syndrome >= code.d_sec)
        throw std::out_of_range("embed_logical: syndrome out of range");
    if (logical.d != code.d_prime ||
        logical.coords.size() != 2 * static_cast<std::size_t>(code.d_prime))
        throw std::invalid_argument("embed_logical: logical dimension mismatch");
    StateVector big;
    big.d = code.d;
    big.coords.assign(2 * static_cast<std::size_t>(code.d), 0.0);
    const std::size_t base = 2 * static_cast<std::size_t>(syndrome) * code.d_prime;
    for (std::size_t j = 0; j < logical.coords.size(); ++j)
        big.coords[base + j] = logical.coords[j];
    return big;
}

} // namespace isoqec
