#pragma once

#include <string>
#include <vector>

#include "combclassic/tensor.hpp"

namespace combclassic {

enum class Sense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded, iteration_cap };

std::string to_string(LpStatus s);

// optimize objective·x  s.t.  a_ub x <= b_ub,  a_eq x == b_eq,  x >= 0 unless free.
struct LpProblem {
    Sense sense = Sense::minimize;
    Eigen::VectorXd objective;
    RealMatrix a_ub;
    Eigen::VectorXd b_ub;
    RealMatrix a_eq;
    Eigen::VectorXd b_eq;
    std::vector<bool> free;
    std::vector<std::string> names;

    Index variables() const { return objective.size(); }
    // Throws DimensionMismatch when the blocks disagree.
    void check() const;
    // Max violation of the constraints and bounds at x.
    double violation(const Eigen::VectorXd& x) const;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    Eigen::VectorXd x;
    long iterations = 0;
};

struct LpOptions {
    long max_pivots = 100000;
    double tol = 1e-9;
};

// Dense two-phase tableau simplex with Bland's rule.
LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {});

}  // namespace combclassic
