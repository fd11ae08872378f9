#pragma once

#include <vector>

#include "combclassic/comb.hpp"
#include "combclassic/prob_table.hpp"

namespace combclassic {

struct Witness {
    unsigned subset = 0;   // measured-slot mask of the larger table
    int dropped_slot = -1;
    std::vector<Index> outcome;  // on the smaller table's slots
};

struct ClassicalityReport {
    bool pass = true;
    double worst_violation = 0.0;
    Witness witness;
    double tol = kDefaultTol;
};

// Tables for every measured subset: P_x on measured slots, Φ+ elsewhere.
ProbFamily projective_family(const Comb& c);

ClassicalityReport kolmogorov_check(const ProbFamily& family, double tol = kDefaultTol);
ClassicalityReport kolmogorov_check(const Comb& c, double tol = kDefaultTol);

struct MarkovReport {
    bool pass = true;
    double worst_violation = 0.0;
    // Conditioning events below the probability floor, as (slot, index in the prefix table).
    std::vector<std::pair<int, std::size_t>> skipped;
};

inline constexpr double kConditioningFloor = 1e-12;

MarkovReport markov_check(const ProbTable& full, double tol = kDefaultTol);

struct NcgdReport {
    bool pass = true;
    double worst_violation = 0.0;
    int worst_pair = -1;
};

// Dephasing-sandwich identity for every adjacent pair of propagators.
NcgdReport ncgd_check(const std::vector<ChoiState>& propagators, double tol = kDefaultTol);
// Diagonal full-rank rho0 with nonzero populations at every time (premise of the converse).
bool invertibility_premise(const ComplexMatrix& rho0, const std::vector<ChoiState>& propagators,
                           double tol = kDefaultTol);

// System dephasing on (s ⊗ e) as a superoperator.
ComplexMatrix system_dephasing_superop(Index system_dim, Index env_dim);

NcgdReport ndgd_check(const Dilation& d, double tol = kDefaultTol);
// Folds Γ_{t1,t0} into the initial state, dephases it, and sandwiches every map between system dephasings.
Dilation ndgd_sandwich(const Dilation& d);

struct ChiDecomposition {
    Comb classical_part;
    ComplexMatrix chi;
};

struct ChiReport {
    bool pass = true;
    double worst_violation = 0.0;
    unsigned subset = 0;  // slots carrying A = Φ+ − D
    std::vector<Index> outcome;
};

ChiDecomposition decompose_classical(const Comb& c);
ChiReport chi_constraints_check(const ComplexMatrix& chi, const FactorLayout& layout, double tol = kDefaultTol);

// (Δ ⊗ 1)[η] == η. Throws NotAState.
bool zero_discord_check(const ComplexMatrix& state, Index system_dim, double tol = kDefaultTol);
// Image of every Π_l ⊗ η over a spanning set of environment states is discord free. Throws NotCptp.
bool dzero_map_check(const ChoiState& g, Index system_dim, double tol = kDefaultTol);

ProbFamily markov_table_from_propagators(const ComplexMatrix& rho0, const std::vector<ChoiState>& propagators);

}  // namespace combclassic
