#pragma once

#include <vector>

#include "isoqec/rng.hpp"
#include "isoqec/state_geometry.hpp"

namespace isoqec {

/// Abstract [n, m] code, modeled purely by basis-index alignment: the
/// discrete error E_s maps |k> to |s d' + k>, so the syndrome-s subspace
/// spans basis indices s d' .. s d' + d' - 1. Any non-degenerate code whose
/// subspaces decompose the space orthogonally is captured this way.
struct CodeParams {
    int n = 2;       // physical qubits
    int m = 1;       // logical qubits
    int d = 4;       // 2^n
    int d_prime = 2; // 2^m
    int d_sec = 2;   // 2^(n-m), number of syndromes

    static CodeParams make(int n, int m);
};

struct CorrectionOutcome {
    int syndrome = 0;
    double probability = 0.0;
    bool zero_branch = false; // probability 0: no corrected state
    StateVector corrected;    // on S^(2d'-1) when !zero_branch
};

/// P_s = squared norm of the projection of psi onto the syndrome-s block.
/// Sums to 1 over s.
std::vector<double> syndrome_probabilities(const StateVector &psi, const CodeParams &code);

/// Every branch: projection onto block s, normalization, relabeling
/// |s d' + k> -> |k> (the action of E_s^-1). Branches with P_s = 0 are
/// flagged and carry no state.
std::vector<CorrectionOutcome> correct_all_branches(const StateVector &psi,
                                                    const CodeParams &code);

/// Quantum measurement over the orthogonal decomposition: samples the
/// syndrome by the Born rule and returns that branch.
CorrectionOutcome measure_and_correct(const StateVector &psi, const CodeParams &code,
                                      Rng &rng);

/// Places a logical state into block s of the big space (the action of E_s);
/// inverse of the relabeling in correct_all_branches.
StateVector embed_logical(const StateVector &logical, int syndrome, const CodeParams &code);

} // namespace isoqec
