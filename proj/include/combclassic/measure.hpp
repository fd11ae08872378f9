#pragma once

#include <optional>
#include <vector>

#include "combclassic/comb.hpp"
#include "combclassic/lp.hpp"

namespace combclassic {

// T_i(x): Φ+ on the identity slots, P_x on the rest.
struct TestingSequence {
    unsigned identity_mask = 0;
    std::vector<int> measured;
    std::vector<Index> outcome;
};

inline constexpr std::size_t kDefaultLpCap = 1000000;
// COMBCLASSIC_CAP when set to a positive integer, else the default.
std::size_t lp_cap();

// Subset bitmask ascending, outcomes lexicographic. Throws SizeLimit when d^K 2^K > cap.
std::vector<TestingSequence> testing_sequences(int slots, Index dim, std::size_t cap = lp_cap());
ComplexMatrix sequence_operator(const TestingSequence& s, int slots, Index dim);

struct LpData {
    int slots = 0;
    Index dim = 2;
    std::vector<unsigned> subsets;                // identity masks in use
    std::vector<TestingSequence> rows;            // one per (i, j)
    std::vector<std::size_t> row_subset;          // position of the row's subset in `subsets`
    RealMatrix alpha;                             // rows x d^K
    Eigen::VectorXd beta;
};

// Restricting `subsets` gives the lower-bound programs.
LpData lp_data(const Comb& c, std::size_t cap = lp_cap(), const std::vector<unsigned>& subsets = {});

// Variables: a, b_ij, p_k.
LpProblem build_primal(const LpData& data);
LpProblem build_primal(const Comb& c, std::size_t cap = lp_cap());
// Variables: Ω, X_i, Y_ij.
LpProblem build_dual(const LpData& data);
LpProblem build_dual(const Comb& c, std::size_t cap = lp_cap());

struct MeasureResult {
    double M = 0.0;
    double P_B = 0.5;
    double primal = 0.0;
    std::optional<double> dual;
    std::optional<double> gap;
    std::optional<double> bound;
    long iterations = 0;
    std::size_t cap = kDefaultLpCap;
    Eigen::VectorXd classical_model;  // optimal p_k
};

// Throws SolverFailure when the simplex does not reach optimality.
MeasureResult measure(const Comb& c, bool with_dual = false, bool with_bound = false, std::size_t cap = lp_cap(),
                      const LpOptions& opt = {});
double nonclassicality_measure(const Comb& c);
double bob_win_probability(const Comb& c);

// Σ_{x2} |P(x2) − Σ_{x1} P(x2, x1)|. Throws WrongArity unless K = 2.
double upper_bound_two_time(const Comb& c);

}  // namespace combclassic
