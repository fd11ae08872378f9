#include "combclassic/lp.hpp"

#include <limits>

namespace combclassic {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_cap: return "iteration_cap";
    }
    return "unknown";
}

void LpProblem::check() const {
    const Index n = variables();
    if (a_ub.rows() != b_ub.size() || (a_ub.rows() > 0 && a_ub.cols() != n))
        throw DimensionMismatch("inequality block shape");
    if (a_eq.rows() != b_eq.size() || (a_eq.rows() > 0 && a_eq.cols() != n))
        throw DimensionMismatch("equality block shape");
    if (!free.empty() && static_cast<Index>(free.size()) != n) throw DimensionMismatch("bounds table length");
}

double LpProblem::violation(const Eigen::VectorXd& x) const {
    double v = 0.0;
    if (a_ub.rows() > 0) v = std::max(v, (a_ub * x - b_ub).maxCoeff());
    if (a_eq.rows() > 0) v = std::max(v, (a_eq * x - b_eq).cwiseAbs().maxCoeff());
    for (Index j = 0; j < x.size(); ++j)
        if (free.empty() || !free[j]) v = std::max(v, -x(j));
    return std::max(v, 0.0);
}

namespace {

struct Tableau {
    RealMatrix t;
    Eigen::VectorXd rhs;
    std::vector<Index> basis;
    long iterations = 0;
    long cap = 0;
    double eps = 1e-9;

    void pivot(Index row, Index col, Eigen::RowVectorXd& reduced) {
        const double piv = t(row, col);
        t.row(row) /= piv;
        rhs(row) /= piv;
        t(row, col) = 1.0;
        for (Index i = 0; i < t.rows(); ++i) {
            if (i == row) continue;
            const double f = t(i, col);
            if (f == 0.0) continue;
            t.row(i) -= f * t.row(row);
            rhs(i) -= f * rhs(row);
            t(i, col) = 0.0;
        }
        const double f = reduced(col);
        reduced -= f * t.row(row);
        reduced(col) = 0.0;
        basis[row] = col;
        ++iterations;
    }

    // Minimizes cost over columns < ncols. Returns optimal, unbounded, or iteration_cap.
    LpStatus run(const Eigen::VectorXd& cost, Index ncols) {
        Eigen::RowVectorXd reduced = cost.transpose();
        for (Index i = 0; i < t.rows(); ++i) reduced -= cost(basis[i]) * t.row(i);
        for (;;) {
            Index enter = -1;
            for (Index j = 0; j < ncols; ++j)
                if (reduced(j) < -eps) {
                    enter = j;
                    break;
                }
            if (enter < 0) return LpStatus::optimal;
            Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < t.rows(); ++i) {
                if (t(i, enter) <= eps) continue;
                const double ratio = rhs(i) / t(i, enter);
                const double tie = 1e-12 * (1.0 + std::abs(best));
                if (leave < 0 || ratio < best - tie) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + tie && basis[i] < basis[leave]) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            if (iterations >= cap) return LpStatus::iteration_cap;
            pivot(leave, enter, reduced);
        }
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) {
    p.check();
    const Index n = p.variables();
    const Index mu = p.a_ub.rows(), me = p.a_eq.rows(), m = mu + me;

    // Structural columns: x+ for every variable, x- for free ones.
    std::vector<Index> neg(n, -1);
    Index ns = n;
    for (Index j = 0; j < n; ++j)
        if (!p.free.empty() && p.free[j]) neg[j] = ns++;

    RealMatrix a = RealMatrix::Zero(m, ns);
    Eigen::VectorXd b(m);
    for (Index i = 0; i < mu; ++i) {
        for (Index j = 0; j < n; ++j) {
            a(i, j) = p.a_ub(i, j);
            if (neg[j] >= 0) a(i, neg[j]) = -p.a_ub(i, j);
        }
        b(i) = p.b_ub(i);
    }
    for (Index i = 0; i < me; ++i) {
        for (Index j = 0; j < n; ++j) {
            a(mu + i, j) = p.a_eq(i, j);
            if (neg[j] >= 0) a(mu + i, neg[j]) = -p.a_eq(i, j);
        }
        b(mu + i) = p.b_eq(i);
    }

    // Slack for each inequality row; artificial wherever the slack cannot start basic.
    std::vector<Index> art_rows;
    for (Index i = 0; i < m; ++i)
        if (i >= mu || b(i) < 0) art_rows.push_back(i);
    const Index na = static_cast<Index>(art_rows.size());
    const Index ncols = ns + mu + na;

    Tableau tb;
    tb.cap = opt.max_pivots;
    tb.eps = opt.tol;
    tb.t = RealMatrix::Zero(m, ncols);
    tb.rhs = b;
    tb.basis.assign(m, -1);
    tb.t.leftCols(ns) = a;
    for (Index i = 0; i < mu; ++i) tb.t(i, ns + i) = 1.0;
    for (Index i = 0; i < m; ++i)
        if (tb.rhs(i) < 0) {
            tb.t.row(i) *= -1.0;
            tb.rhs(i) *= -1.0;
        }
    for (Index k = 0; k < na; ++k) {
        tb.t(art_rows[k], ns + mu + k) = 1.0;
        tb.basis[art_rows[k]] = ns + mu + k;
    }
    for (Index i = 0; i < mu; ++i)
        if (tb.basis[i] < 0) tb.basis[i] = ns + i;

    LpSolution sol;
    if (na > 0) {
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(ncols);
        c1.tail(na).setOnes();
        const LpStatus s1 = tb.run(c1, ncols);
        sol.iterations = tb.iterations;
        if (s1 == LpStatus::iteration_cap) {
            sol.status = s1;
            return sol;
        }
        double infeas = 0.0;
        for (Index i = 0; i < m; ++i)
            if (tb.basis[i] >= ns + mu) infeas += tb.rhs(i);
        if (infeas > 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        std::vector<Index> keep;
        for (Index i = 0; i < m; ++i) {
            if (tb.basis[i] < ns + mu) {
                keep.push_back(i);
                continue;
            }
            Index col = -1;
            for (Index j = 0; j < ns + mu; ++j)
                if (std::abs(tb.t(i, j)) > 1e-9) {
                    col = j;
                    break;
                }
            if (col >= 0) {
                Eigen::RowVectorXd dummy = Eigen::RowVectorXd::Zero(ncols);
                tb.pivot(i, col, dummy);
                keep.push_back(i);
            }
        }
        if (static_cast<Index>(keep.size()) < m) {
            RealMatrix t2(keep.size(), ncols);
            Eigen::VectorXd r2(keep.size());
            std::vector<Index> b2;
            for (std::size_t k = 0; k < keep.size(); ++k) {
                t2.row(k) = tb.t.row(keep[k]);
                r2(k) = tb.rhs(keep[k]);
                b2.push_back(tb.basis[keep[k]]);
            }
            tb.t = std::move(t2);
            tb.rhs = std::move(r2);
            tb.basis = std::move(b2);
        }
    }

    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(ncols);
    const double sign = p.sense == Sense::maximize ? -1.0 : 1.0;
    for (Index j = 0; j < n; ++j) {
        c2(j) = sign * p.objective(j);
        if (neg[j] >= 0) c2(neg[j]) = -sign * p.objective(j);
    }
    const LpStatus s2 = tb.run(c2, ns + mu);
    sol.iterations = tb.iterations;
    sol.status = s2;
    if (s2 != LpStatus::optimal) return sol;

    Eigen::VectorXd xs = Eigen::VectorXd::Zero(ncols);
    for (Index i = 0; i < tb.t.rows(); ++i) xs(tb.basis[i]) = tb.rhs(i);
    sol.x = Eigen::VectorXd::Zero(n);
    for (Index j = 0; j < n; ++j) sol.x(j) = xs(j) - (neg[j] >= 0 ? xs(neg[j]) : 0.0);
    sol.value = p.objective.dot(sol.x);
    return sol;
}

}  // namespace combclassic
