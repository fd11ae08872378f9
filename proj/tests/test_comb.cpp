#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "combclassic/comb.hpp"
#include "combclassic/models.hpp"
#include "oracles.hpp"

using namespace combclassic;

namespace {

double maxabs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

oracle::Chain chain_of(const Dilation& d) {
    oracle::Chain c;
    c.system_dim = d.system_dim;
    c.env_dims = d.env_dims;
    c.initial = d.initial_state;
    for (const auto& m : d.maps) c.maps.push_back(m.matrix);
    return c;
}

// Random trace-nonincreasing operation: a weighted channel element.
ChoiState random_operation(Rng& rng) {
    const ComplexMatrix u = random_unitary(rng, 2);
    const double s = rng.uniform();
    return choi_of_map({std::sqrt(s) * u * projector(basis_ket(2, 0)) + 0.3 * u * projector(basis_ket(2, 1))});
}

std::vector<ChoiState> all_sequences_projective(int slots, std::size_t idx) {
    std::vector<ChoiState> seq;
    for (int j = 0; j < slots; ++j) seq.push_back(projector_choi(2, (idx >> j) & 1));
    return seq;
}

}  // namespace

TEST_CASE("comb from a random dilation matches direct propagation") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Dilation d = random_dilation(seed, 2, 2, 2);
        const Comb c = comb_from_dilation(d);
        CHECK(validate_comb(c).pass);
        const oracle::Chain ch = chain_of(d);
        Rng rng(seed + 100);
        for (int trial = 0; trial < 5; ++trial) {
            const ChoiState a = random_operation(rng), b = random_operation(rng);
            const double lib = born_probability(c, {a, b});
            CHECK(std::abs(lib - oracle::probability(ch, {a.matrix, b.matrix})) < 1e-10);
        }
        CHECK(std::abs(born_probability(c, {identity_choi(2), dephasing_choi(2)}) - 1.0) < 1e-12);
    }
}

TEST_CASE("trivial dilation gives the closed-system comb") {
    Rng rng(7);
    Dilation d;
    d.env_dims = {1, 1, 1};
    d.initial_state = random_state(rng, 2);
    const ComplexMatrix u = random_unitary(rng, 2);
    d.maps = {identity_choi(2), choi_of_unitary(u)};
    d.times = {0.0, 1.0};
    const Comb c = comb_from_dilation(d);
    const ChoiState a = random_operation(rng), b = random_operation(rng);
    const ComplexMatrix after = apply_map(b, u * apply_map(a, d.initial_state) * u.adjoint());
    CHECK(std::abs(born_probability(c, {a, b}) - after.trace().real()) < 1e-12);
}

TEST_CASE("appendix D and G combs") {
    const Dilation d = appendix_d_dilation();
    const Comb c = appendix_d_comb();
    CHECK(validate_comb(c).pass);
    const oracle::Chain ch = chain_of(d);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto seq = all_sequences_projective(2, k);
        CHECK(std::abs(born_probability(c, seq) - oracle::probability(ch, {seq[0].matrix, seq[1].matrix})) < 1e-12);
    }
    CHECK(std::abs(born_probability(c, {identity_choi(2), identity_choi(2)}) - 1.0) < 1e-12);

    const Comb g = appendix_g_comb();
    CHECK(validate_comb(g).pass);
    for (int slot = 0; slot < g.slots(); ++slot) {
        const ComplexMatrix s = slot_state(g, slot, {});
        CHECK(maxabs(s - ComplexMatrix::Identity(2, 2) / 2.0) < 1e-12);
    }
}

TEST_CASE("marginal combs and contraction") {
    const Comb c = random_comb(5, 2, 2, 3);
    const Comb m = marginal_comb(c, {1});
    CHECK(m.slots() == 2);
    CHECK(validate_comb(m).pass);
    Rng rng(6);
    const ChoiState a = random_operation(rng), b = random_operation(rng);
    CHECK(std::abs(born_probability(m, {a, b}) - born_probability(c, {a, identity_choi(2), b})) < 1e-12);

    const ChoiState partial = contract_slots(c, {{0, a.matrix}, {2, b.matrix}});
    CHECK(partial.matrix.rows() == 4);
    CHECK(std::abs(pairing(make_comb(partial.matrix, 1, 2), {identity_choi(2).matrix}).real() -
                   born_probability(c, {a, identity_choi(2), b})) < 1e-12);
}

TEST_CASE("causality validation") {
    const Comb good = random_comb(9, 2, 2, 2);
    const CausalityReport r = validate_comb(good);
    CHECK(r.pass);
    CHECK(r.residuals.size() == 2);

    // Input at slot 0 copies the output fed back at slot 0: signalling backwards in time.
    ComplexMatrix diag = ComplexMatrix::Zero(16, 16);
    for (Index o1 = 0; o1 < 2; ++o1)
        for (Index s = 0; s < 2; ++s) {
            const Index idx = ((o1 * 2 + s) * 2 + s) * 2 + s;
            diag(idx, idx) = 0.5;
        }
    const CausalityReport bad = validate_comb(make_comb(diag, 2, 2, {}, true));
    CHECK(bad.psd);
    CHECK(bad.normalized);
    CHECK_FALSE(bad.hierarchy);
    CHECK_FALSE(bad.pass);
    CHECK(bad.relaxed);

    const ComplexMatrix swapped = permute_factors(good.choi, std::vector<Index>{2, 2, 2, 2}, {1, 0, 2, 3});
    CHECK_FALSE(validate_comb(make_comb(swapped, 2, 2)).pass);

    ComplexMatrix neg = good.choi;
    neg(0, 0) -= 1.0;
    CHECK_FALSE(validate_comb(make_comb(neg, 2, 2)).psd);
}

TEST_CASE("rotated comb gives rotated projective statistics") {
    const Comb c = random_comb(12, 2, 2, 2);
    const ComplexMatrix h = pauli::hadamard();
    const Comb r = rotate_comb(c, h);
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<ChoiState> lab;
        for (int j = 0; j < 2; ++j) lab.push_back(choi_of_map({projector(h.col((k >> j) & 1))}));
        CHECK(std::abs(born_probability(r, all_sequences_projective(2, k)) - born_probability(c, lab)) < 1e-12);
    }
}

TEST_CASE("joint tables") {
    const Comb c = random_comb(3, 2, 2, 2);
    const ProbTable t = joint_table(c, {projective_instrument(2), projective_instrument(2)});
    CHECK(t.size() == 4);
    CHECK(std::abs(t.total() - 1.0) < 1e-12);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto o = t.outcome(k);
        CHECK(std::abs(t.probs[k] - born_probability(c, {projector_choi(2, o[0]), projector_choi(2, o[1])})) < 1e-12);
    }
    CHECK_THROWS(born_probability(c, {identity_choi(2)}));
}
