#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "combclassic/classicality.hpp"
#include "combclassic/measure.hpp"
#include "combclassic/models.hpp"
#include "oracles.hpp"

using namespace combclassic;

namespace {

oracle::Chain chain_of(const Dilation& d) {
    oracle::Chain c{d.system_dim, d.env_dims, d.initial_state, {}};
    for (const auto& m : d.maps) c.maps.push_back(m.matrix);
    return c;
}

// Alpha and beta built from direct propagation: outcome tuples y over (slot 0, slot 1), slot 0 most significant.
oracle::VertexResult two_slot_oracle(const Dilation& d) {
    const oracle::Chain ch = chain_of(d);
    std::vector<RealMatrix> alpha;
    std::vector<Eigen::VectorXd> beta;
    for (unsigned mask = 0; mask < 4; ++mask) {
        std::vector<int> measured;
        for (int j = 0; j < 2; ++j)
            if (!(mask & (1u << j))) measured.push_back(j);
        const Index rows = Index(1) << measured.size();
        RealMatrix a = RealMatrix::Zero(rows, 4);
        Eigen::VectorXd b(rows);
        for (Index r = 0; r < rows; ++r) {
            std::vector<oracle::CMat> ops(2);
            std::vector<Index> x(2, -1);
            for (std::size_t m = 0; m < measured.size(); ++m) {
                const Index v = (r >> (measured.size() - 1 - m)) & 1;
                x[measured[m]] = v;
                oracle::CMat p = oracle::CMat::Zero(4, 4);
                p(v * 3, v * 3) = 1.0;
                ops[measured[m]] = p;
            }
            b(r) = oracle::probability(ch, ops);
            for (Index y = 0; y < 4; ++y) {
                const Index y0 = y >> 1, y1 = y & 1;
                a(r, y) = (x[0] < 0 || x[0] == y0) && (x[1] < 0 || x[1] == y1) ? 1.0 : 0.0;
            }
        }
        alpha.push_back(a);
        beta.push_back(b);
    }
    return oracle::vertex_enumeration(alpha, beta);
}

}  // namespace

TEST_CASE("testing sequences") {
    CHECK(testing_sequences(1, 2).size() == 3);
    const auto s2 = testing_sequences(2, 2);
    CHECK(s2.size() == 9);
    CHECK(s2.front().identity_mask == 0);
    CHECK(s2.back().identity_mask == 3);
    CHECK(s2.back().measured.empty());
    CHECK(testing_sequences(3, 3).size() == 64);
    CHECK_THROWS_AS(testing_sequences(3, 2, 50), SizeLimit);

    const Comb c = random_comb(3, 2, 2, 2);
    std::map<unsigned, double> sums;
    for (const auto& s : s2) {
        const ComplexMatrix op = sequence_operator(s, 2, 2);
        CHECK(op.rows() == 16);
        sums[s.identity_mask] += op.cwiseProduct(c.choi).sum().real();
    }
    for (const auto& [mask, total] : sums) CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("cap from the environment") {
    CHECK(lp_cap() == kDefaultLpCap);
    setenv("COMBCLASSIC_CAP", "10", 1);
    CHECK(lp_cap() == 10);
    CHECK_THROWS_AS(measure(appendix_d_comb()), SizeLimit);
    setenv("COMBCLASSIC_CAP", "nonsense", 1);
    CHECK(lp_cap() == kDefaultLpCap);
    unsetenv("COMBCLASSIC_CAP");
}

TEST_CASE("LP data") {
    const LpData data = lp_data(appendix_d_comb());
    CHECK(data.alpha.rows() == 9);
    CHECK(data.alpha.cols() == 4);
    CHECK((data.alpha.array() * (1.0 - data.alpha.array())).abs().maxCoeff() == 0.0);
    const LpProblem primal = build_primal(data);
    CHECK(primal.variables() == 1 + 9 + 4);  // a, b per row, p per atom
    CHECK(primal.a_eq.rows() == 1);
    const LpProblem dual = build_dual(data);
    CHECK(dual.sense == Sense::maximize);
}

TEST_CASE("classical combs have zero measure") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const MeasureResult r = measure(random_classical_comb(seed, 2, 2), true, true);
        CHECK(std::abs(r.M) < 1e-9);
        CHECK(std::abs(r.P_B - 0.5) < 1e-9);
        CHECK(std::abs(*r.dual) < 1e-9);
        CHECK(*r.bound < 1e-12);
    }
    const MeasureResult one = measure(random_classical_comb(4, 2, 1));
    CHECK(std::abs(one.primal) < 1e-9);
}

TEST_CASE("appendix D measure") {
    const Comb c = appendix_d_comb();
    const MeasureResult r = measure(c, true, true);
    const oracle::VertexResult o = two_slot_oracle(appendix_d_dilation());
    CHECK(std::abs(r.primal - o.value) < 1e-8);
    CHECK(std::abs(*r.dual - r.primal) < 1e-7);
    CHECK(std::abs(r.M - 0.25) < 1e-9);
    CHECK(r.P_B > 0.5);
    CHECK(std::abs(*r.bound - 1.0) < 1e-12);
    CHECK(r.M <= *r.bound + 1e-9);
    CHECK(std::abs(r.classical_model.sum() - 1.0) < 1e-9);
    CHECK(std::abs(nonclassicality_measure(c) - r.M) < 1e-12);
    CHECK(std::abs(bob_win_probability(c) - r.P_B) < 1e-12);

    // Weak duality against a feasible primal point: uniform p.
    const LpData data = lp_data(c);
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.25);
    const Eigen::VectorXd dev = (data.alpha * p - data.beta).cwiseAbs();
    std::vector<double> per(data.subsets.size(), 0.0);
    for (Index r2 = 0; r2 < dev.size(); ++r2) per[data.row_subset[r2]] += dev(r2);
    CHECK(*r.dual <= *std::max_element(per.begin(), per.end()) + 1e-9);
}

TEST_CASE("restricted testing sets give lower bounds") {
    for (std::uint64_t seed : {2u, 5u}) {
        const Comb c = random_comb(seed, 2, 2, 2);
        const double full = measure(c).primal;
        const LpSolution part = solve_lp(build_primal(lp_data(c, lp_cap(), {0u, 3u})));
        REQUIRE(part.status == LpStatus::optimal);
        CHECK(part.value <= full + 1e-9);
        CHECK(full <= 2.0 + 1e-9);
    }
}

TEST_CASE("faithfulness and duality on random combs") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Comb c = seed % 3 == 0   ? random_classical_comb(seed, 2, 2)
                 : seed % 3 == 1 ? random_comb(seed, 2, 2, 2)
                                 : comb_from_dilation(random_ndgd_dilation(seed, 2, 2, 2));
        const MeasureResult r = measure(c, true);
        CHECK(std::abs(*r.gap) <= 1e-7);
        CHECK(r.M >= -1e-12);
        CHECK(r.M <= 1.0 + 1e-12);
        CHECK((r.M <= 1e-9) == kolmogorov_check(c).pass);
        ++checked;
    }
    CHECK(checked == 30);
}

TEST_CASE("dephasing model") {
    const ComplexMatrix rho = example1_initial_state(0.3);
    // Unequal gaps: with t2 = 2 t1 the k(t2 - 2 t1) = k(0) echo term survives any Γ.
    const Comb fast = dephasing_comb(lorentzian_kernel(1e3), {0.0, 1.0, 2.5}, rho);
    CHECK(measure(dephasing_comb(lorentzian_kernel(1e3), {0.0, 1.0, 2.0}, rho)).M > 1e-3);
    CHECK(measure(fast).M <= 1e-9);

    const Comb c = dephasing_comb(lorentzian_kernel(0.5), {0.0, 1.0, 2.0}, example1_initial_state(1.0));
    const MeasureResult r = measure(c, true, true);
    // P(+ at t2) with and without the t1 measurement, from the kernel: ρ01 = 1/2.
    const double k2 = std::exp(-2.0);
    const double direct = 0.5 * (1.0 + k2), marginal = 0.5 * (1.0 + 0.5 * k2 + 0.5);
    CHECK(std::abs(*r.bound - 2.0 * std::abs(direct - marginal)) < 1e-10);
    CHECK(r.M <= *r.bound + 1e-9);
    CHECK(r.M > 1e-3);

    CHECK_THROWS_AS(upper_bound_two_time(random_comb(1, 2, 2, 3)), WrongArity);
}
