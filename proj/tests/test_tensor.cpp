#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "combclassic/models.hpp"
#include "combclassic/tensor.hpp"
#include "oracles.hpp"

using namespace combclassic;

namespace {

double maxabs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

ComplexMatrix random_matrix(Rng& rng, Index r, Index c) {
    ComplexMatrix m(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i) m(i, j) = rng.complex_normal();
    return m;
}

}  // namespace

TEST_CASE("kron basics") {
    CHECK(maxabs(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) - ComplexMatrix::Identity(4, 4)) == 0.0);
    const ComplexMatrix zx = kron(pauli::z(), pauli::x());
    CHECK(maxabs(zx.block(0, 0, 2, 2) - pauli::x()) == 0.0);
    CHECK(maxabs(zx.block(2, 2, 2, 2) + pauli::x()) == 0.0);
    CHECK(maxabs(zx.block(0, 2, 2, 2)) == 0.0);
}

TEST_CASE("kron acts factorwise on product vectors") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2);
        const ComplexMatrix v = random_matrix(rng, 2, 1), w = random_matrix(rng, 2, 1);
        Eigen::VectorXcd vw(4), avbw(4);
        const Eigen::VectorXcd av = a * v, bw = b * w;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                vw(2 * i + j) = v(i, 0) * w(j, 0);
                avbw(2 * i + j) = av(i) * bw(j);
            }
        CHECK((kron(a, b) * vw - avbw).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("partial trace") {
    const ComplexMatrix phi = identity_choi(2).matrix;
    CHECK(maxabs(partial_trace(phi, std::vector<Index>{2, 2}, {1}) - ComplexMatrix::Identity(2, 2)) < 1e-15);

    Rng rng(3);
    const ComplexMatrix rho = random_state(rng, 2), sigma = random_state(rng, 3) * 2.5;
    CHECK(maxabs(partial_trace(kron(rho, sigma), std::vector<Index>{2, 3}, {1}) - rho * sigma.trace()) < 1e-12);

    const ComplexMatrix big = random_state(rng, 8);
    const ComplexMatrix mid = partial_trace(big, std::vector<Index>{2, 2, 2}, {1});
    CHECK(maxabs(mid - oracle::partial_trace(big, {2, 2, 2}, {false, true, false})) < 1e-14);
    CHECK(std::abs(mid.trace() - big.trace()) < 1e-14);

    const ComplexMatrix m = random_matrix(rng, 12, 12);
    CHECK(maxabs(partial_trace(m, std::vector<Index>{3, 2, 2}, {0, 2}) -
                 oracle::partial_trace(m, {3, 2, 2}, {true, false, true})) < 1e-12);
    CHECK_THROWS_AS(partial_trace(m, std::vector<Index>{3, 3}, {0}), LayoutMismatch);
    CHECK_THROWS_AS(partial_trace(ComplexMatrix(random_matrix(rng, 4, 3)), std::vector<Index>{2, 2}, {0}), LayoutMismatch);
}

TEST_CASE("permute factors matches explicit index relabeling") {
    Rng rng(5);
    const std::vector<Index> dims{2, 3, 2};
    const ComplexMatrix m = random_matrix(rng, 12, 12);
    const std::vector<int> order{2, 0, 1};
    const ComplexMatrix p = permute_factors(m, dims, order);
    const std::vector<Index> pdims{2, 2, 3};
    for (Index r = 0; r < 12; ++r)
        for (Index c = 0; c < 12; ++c) {
            const auto dr = oracle::digits(r, pdims), dc = oracle::digits(c, pdims);
            std::vector<Index> sr(3), sc(3);
            for (int k = 0; k < 3; ++k) {
                sr[order[k]] = dr[k];
                sc[order[k]] = dc[k];
            }
            CHECK(p(r, c) == m(oracle::undigits(sr, dims), oracle::undigits(sc, dims)));
        }
}

TEST_CASE("partial transpose and computational transpose") {
    Rng rng(8);
    const ComplexMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 3, 3);
    CHECK(maxabs(partial_transpose(kron(a, b), std::vector<Index>{2, 3}, {1}) - kron(a, ComplexMatrix(b.transpose()))) <
          1e-14);
    const ComplexMatrix h = ComplexMatrix(RealMatrix::Random(3, 3).selfadjointView<Eigen::Upper>().toDenseMatrix().cast<Complex>());
    CHECK(maxabs(transpose_computational(h) - h) == 0.0);
    CHECK(maxabs(transpose_computational(pauli::y()) + pauli::y()) == 0.0);
    const ComplexMatrix m = random_matrix(rng, 4, 4);
    CHECK(maxabs(transpose_computational(transpose_computational(m)) - m) == 0.0);
}

TEST_CASE("psd and hermitian predicates") {
    CHECK(is_psd(ComplexMatrix::Identity(4, 4), 1e-12));
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1e-6;
    CHECK_FALSE(is_psd(d, 1e-12));
    const ComplexMatrix phi = identity_choi(2).matrix;
    CHECK(is_psd(phi));
    const Eigen::VectorXd ev = hermitian_eigenvalues(phi);
    CHECK(std::abs(ev(3) - 2.0) < 1e-12);
    CHECK(ev.head(3).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_FALSE(is_hermitian(ComplexMatrix(pauli::x() * Complex(0.0, 1.0))));
    CHECK_THROWS_AS(is_psd(ComplexMatrix::Zero(2, 3)), LayoutMismatch);
}

TEST_CASE("layout bookkeeping") {
    const FactorLayout l = comb_layout(2, 2);
    CHECK(l.dim() == 16);
    CHECK(l.find(0, Port::in) == 3);
    CHECK(l.find(1, Port::out) == 0);
    CHECK_THROWS_AS(l.validate(8), LayoutMismatch);
    FactorLayout dup = l;
    dup.factors[0] = dup.factors[2];
    CHECK_THROWS_AS(dup.validate(16), LayoutMismatch);
}
