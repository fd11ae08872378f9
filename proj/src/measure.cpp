#include "combclassic/measure.hpp"

#include <cstdlib>
#include <string>

#include "combclassic/classicality.hpp"

namespace combclassic {

std::size_t lp_cap() {
    if (const char* env = std::getenv("COMBCLASSIC_CAP")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return kDefaultLpCap;
}

std::vector<TestingSequence> testing_sequences(int slots, Index dim, std::size_t cap) {
    if (slots < 1 || dim < 2) throw BadParameter("testing sequences need K >= 1 and d >= 2");
    double size = 1.0;
    for (int j = 0; j < slots; ++j) size *= 2.0 * static_cast<double>(dim);
    if (size > static_cast<double>(cap))
        throw SizeLimit("d^K 2^K = " + std::to_string(size) + " exceeds cap " + std::to_string(cap));
    std::vector<TestingSequence> out;
    for (unsigned mask = 0; mask < (1u << slots); ++mask) {
        const auto measured = mask_slots(((1u << slots) - 1u) & ~mask, slots);
        const ProbTable shape = make_table(measured, dim);
        for (std::size_t idx = 0; idx < shape.size(); ++idx) out.push_back({mask, measured, shape.outcome(idx)});
    }
    return out;
}

ComplexMatrix sequence_operator(const TestingSequence& s, int slots, Index dim) {
    std::vector<ComplexMatrix> ops(slots, identity_choi(dim).matrix);
    for (std::size_t m = 0; m < s.measured.size(); ++m) ops[s.measured[m]] = projector_choi(dim, s.outcome[m]).matrix;
    return kron_all(std::vector<ComplexMatrix>(ops.rbegin(), ops.rend()));
}

LpData lp_data(const Comb& c, std::size_t cap, const std::vector<unsigned>& subsets) {
    LpData data;
    data.slots = c.slots();
    data.dim = c.system_dim;
    const auto all = testing_sequences(data.slots, data.dim, cap);
    if (subsets.empty()) {
        for (unsigned m = 0; m < (1u << data.slots); ++m) data.subsets.push_back(m);
    } else {
        data.subsets = subsets;
    }
    for (const auto& s : all) {
        for (std::size_t pos = 0; pos < data.subsets.size(); ++pos)
            if (data.subsets[pos] == s.identity_mask) {
                data.rows.push_back(s);
                data.row_subset.push_back(pos);
            }
    }

    // y-tuples over all slots, lexicographic.
    std::vector<int> every;
    for (int j = 0; j < data.slots; ++j) every.push_back(j);
    const ProbTable ys = make_table(every, data.dim);
    const Index nk = static_cast<Index>(ys.size());
    const Index nr = static_cast<Index>(data.rows.size());
    data.alpha = RealMatrix::Zero(nr, nk);
    data.beta = Eigen::VectorXd::Zero(nr);
    const ComplexMatrix phi = identity_choi(data.dim).matrix;
    for (Index r = 0; r < nr; ++r) {
        const auto& s = data.rows[r];
        for (Index k = 0; k < nk; ++k) {
            const auto y = ys.outcome(static_cast<std::size_t>(k));
            bool match = true;
            for (std::size_t m = 0; m < s.measured.size(); ++m) match = match && y[s.measured[m]] == s.outcome[m];
            data.alpha(r, k) = match ? 1.0 : 0.0;
        }
        std::vector<ComplexMatrix> ops(data.slots, phi);
        for (std::size_t m = 0; m < s.measured.size(); ++m)
            ops[s.measured[m]] = projector_choi(data.dim, s.outcome[m]).matrix;
        const Complex b = pairing(c, ops);
        if (std::abs(b.imag()) > 1e-8) throw NonRealProbability("testing-sequence value");
        data.beta(r) = b.real();
    }
    return data;
}

LpProblem build_primal(const LpData& data) {
    const Index ni = static_cast<Index>(data.subsets.size());
    const Index nr = data.alpha.rows(), nk = data.alpha.cols();
    const Index n = 1 + nr + nk;
    LpProblem p;
    p.sense = Sense::minimize;
    p.objective = Eigen::VectorXd::Zero(n);
    p.objective(0) = 1.0;
    p.names.push_back("a");
    for (Index r = 0; r < nr; ++r) p.names.push_back("b_" + std::to_string(r));
    for (Index k = 0; k < nk; ++k) p.names.push_back("p_" + std::to_string(k));
    p.free.assign(n, false);

    p.a_ub = RealMatrix::Zero(ni + 2 * nr, n);
    p.b_ub = Eigen::VectorXd::Zero(ni + 2 * nr);
    for (Index r = 0; r < nr; ++r) p.a_ub(static_cast<Index>(data.row_subset[r]), 1 + r) = 1.0;
    for (Index i = 0; i < ni; ++i) p.a_ub(i, 0) = -1.0;
    for (Index r = 0; r < nr; ++r) {
        const Index up = ni + 2 * r, dn = up + 1;
        p.a_ub.row(up).segment(1 + nr, nk) = data.alpha.row(r);
        p.a_ub(up, 1 + r) = -1.0;
        p.b_ub(up) = data.beta(r);
        p.a_ub.row(dn).segment(1 + nr, nk) = -data.alpha.row(r);
        p.a_ub(dn, 1 + r) = -1.0;
        p.b_ub(dn) = -data.beta(r);
    }
    p.a_eq = RealMatrix::Zero(1, n);
    p.a_eq.row(0).tail(nk).setOnes();
    p.b_eq = Eigen::VectorXd::Ones(1);
    return p;
}

LpProblem build_primal(const Comb& c, std::size_t cap) { return build_primal(lp_data(c, cap)); }

LpProblem build_dual(const LpData& data) {
    const Index ni = static_cast<Index>(data.subsets.size());
    const Index nr = data.alpha.rows(), nk = data.alpha.cols();
    const Index n = 1 + ni + nr;
    LpProblem p;
    p.sense = Sense::maximize;
    p.objective = Eigen::VectorXd::Zero(n);
    p.objective(0) = 1.0;
    p.names.push_back("Omega");
    for (Index i = 0; i < ni; ++i) p.names.push_back("X_" + std::to_string(i));
    for (Index r = 0; r < nr; ++r) p.names.push_back("Y_" + std::to_string(r));
    p.free.assign(n, false);
    p.free[0] = true;

    // Ω − Σ_ij (α_ijk − β_ij)(2Y_ij − X_i) <= 0 for every k; Y_ij − X_i <= 0.
    p.a_ub = RealMatrix::Zero(nk + nr, n);
    p.b_ub = Eigen::VectorXd::Zero(nk + nr);
    for (Index k = 0; k < nk; ++k) {
        p.a_ub(k, 0) = 1.0;
        for (Index r = 0; r < nr; ++r) {
            const double w = data.alpha(r, k) - data.beta(r);
            p.a_ub(k, 1 + ni + r) -= 2.0 * w;
            p.a_ub(k, 1 + static_cast<Index>(data.row_subset[r])) += w;
        }
    }
    for (Index r = 0; r < nr; ++r) {
        p.a_ub(nk + r, 1 + ni + r) = 1.0;
        p.a_ub(nk + r, 1 + static_cast<Index>(data.row_subset[r])) = -1.0;
    }
    p.a_eq = RealMatrix::Zero(1, n);
    p.a_eq.row(0).segment(1, ni).setOnes();
    p.b_eq = Eigen::VectorXd::Ones(1);
    return p;
}

LpProblem build_dual(const Comb& c, std::size_t cap) { return build_dual(lp_data(c, cap)); }

namespace {

LpSolution solve_or_throw(const LpProblem& p, const LpOptions& opt, const char* what) {
    LpSolution s = solve_lp(p, opt);
    if (s.status != LpStatus::optimal) throw SolverFailure(std::string(what) + " LP: " + to_string(s.status));
    return s;
}

}  // namespace

MeasureResult measure(const Comb& c, bool with_dual, bool with_bound, std::size_t cap, const LpOptions& opt) {
    const LpData data = lp_data(c, cap);
    const LpProblem primal = build_primal(data);
    const LpSolution ps = solve_or_throw(primal, opt, "primal");
    MeasureResult r;
    r.cap = cap;
    r.primal = ps.value;
    r.M = ps.value / 2.0;
    r.P_B = (1.0 + r.M) / 2.0;
    r.iterations = ps.iterations;
    r.classical_model = ps.x.tail(data.alpha.cols());
    if (with_dual) {
        const LpSolution ds = solve_or_throw(build_dual(data), opt, "dual");
        r.dual = ds.value;
        r.gap = std::abs(ps.value - ds.value);
        r.iterations += ds.iterations;
    }
    if (with_bound) r.bound = upper_bound_two_time(c);
    return r;
}

double nonclassicality_measure(const Comb& c) { return measure(c).M; }

double bob_win_probability(const Comb& c) { return measure(c).P_B; }

double upper_bound_two_time(const Comb& c) {
    if (c.slots() != 2) throw WrongArity("upper bound needs exactly two slots, got " + std::to_string(c.slots()));
    const ProbFamily fam = projective_family(c);
    const ProbTable& single = fam.tables.at(0b10u);
    const ProbTable marg = fam.tables.at(0b11u).marginalize(0);
    double s = 0.0;
    for (std::size_t x = 0; x < single.size(); ++x) s += std::abs(single.probs[x] - marg.probs[x]);
    return s;
}

}  // namespace combclassic
