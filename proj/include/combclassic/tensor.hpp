#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numeric>
#include <set>
#include <vector>

#include "combclassic/errors.hpp"

namespace combclassic {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using ComplexMatrix = Matrix<Complex>;
using RealMatrix = Matrix<double>;

inline constexpr double kDefaultTol = 1e-9;

enum class Port { in, out, none };

struct Factor {
    Index dim = 1;
    int slot = -1;
    Port port = Port::none;
};

struct FactorLayout {
    std::vector<Factor> factors;

    static FactorLayout plain(const std::vector<Index>& dims);

    Index dim() const;
    std::vector<Index> dims() const;
    std::size_t size() const { return factors.size(); }
    // Index of the factor carrying (slot, port), or -1.
    int find(int slot, Port port) const;
    // Throws LayoutMismatch on duplicate labels or when dim() != expected.
    void validate(Index expected) const;
    FactorLayout select(const std::vector<int>& keep) const;
};

namespace detail {

// Linear offset contributed by each multi-index over the factors in `which`.
std::vector<Index> offsets(const std::vector<Index>& dims, const std::vector<int>& which);
std::vector<int> complement(int n, const std::set<int>& drop);
Index product(const std::vector<Index>& dims);

}  // namespace detail

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    using Scalar = typename DA::Scalar;
    Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Left-to-right product a_0 ⊗ a_1 ⊗ ...
template <typename Scalar>
Matrix<Scalar> kron_all(const std::vector<Matrix<Scalar>>& ms) {
    Matrix<Scalar> out = Matrix<Scalar>::Ones(1, 1);
    for (const auto& m : ms) out = kron(out, m);
    return out;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw LayoutMismatch("matrix is not square");
}

template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const std::vector<Index>& dims,
                   const std::set<int>& drop) {
    using Scalar = typename Derived::Scalar;
    require_square(m);
    if (detail::product(dims) != m.rows()) throw LayoutMismatch("factor dims do not match matrix");
    for (int d : drop)
        if (d < 0 || d >= static_cast<int>(dims.size())) throw LayoutMismatch("drop index out of range");
    const auto keep = detail::complement(static_cast<int>(dims.size()), drop);
    const std::vector<int> gone(drop.begin(), drop.end());
    const auto ko = detail::offsets(dims, keep);
    const auto go = detail::offsets(dims, gone);
    const Index n = static_cast<Index>(ko.size());
    Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r) {
            Scalar s(0);
            for (Index t : go) s += m(ko[r] + t, ko[c] + t);
            out(r, c) = s;
        }
    return out;
}

template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const FactorLayout& layout,
                   const std::set<int>& drop) {
    return partial_trace(m, layout.dims(), drop);
}

// Result factor k is input factor order[k].
template <typename Derived>
auto permute_factors(const Eigen::MatrixBase<Derived>& m, const std::vector<Index>& dims,
                     const std::vector<int>& order) {
    using Scalar = typename Derived::Scalar;
    require_square(m);
    if (detail::product(dims) != m.rows() || order.size() != dims.size())
        throw LayoutMismatch("permutation does not match factors");
    const auto map = detail::offsets(dims, order);
    const Index n = m.rows();
    Matrix<Scalar> out(n, n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r) out(r, c) = m(map[r], map[c]);
    return out;
}

// Transpose on the listed factors only.
template <typename Derived>
auto partial_transpose(const Eigen::MatrixBase<Derived>& m, const std::vector<Index>& dims,
                       const std::set<int>& which) {
    using Scalar = typename Derived::Scalar;
    require_square(m);
    if (detail::product(dims) != m.rows()) throw LayoutMismatch("factor dims do not match matrix");
    const auto rest = detail::complement(static_cast<int>(dims.size()), which);
    const std::vector<int> tr(which.begin(), which.end());
    const auto ro = detail::offsets(dims, rest);
    const auto to = detail::offsets(dims, tr);
    Matrix<Scalar> out(m.rows(), m.cols());
    for (Index a : ro)
        for (Index b : ro)
            for (Index s : to)
                for (Index t : to) out(a + s, b + t) = m(a + t, b + s);
    return out;
}

template <typename Derived>
auto transpose_computational(const Eigen::MatrixBase<Derived>& m) {
    return Matrix<typename Derived::Scalar>(m.transpose());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTol) {
    require_square(m);
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTol) {
    require_square(m);
    if (!is_hermitian(m, tol)) return false;
    const ComplexMatrix h = m.template cast<Complex>();
    return hermitian_eigenvalues(h).minCoeff() >= -tol;
}

bool is_finite(const ComplexMatrix& m);

// Largest singular value.
double operator_norm(const ComplexMatrix& m);

ComplexMatrix ket_bra(const Eigen::VectorXcd& ket, const Eigen::VectorXcd& bra);
ComplexMatrix projector(const Eigen::VectorXcd& ket);
Eigen::VectorXcd basis_ket(Index dim, Index k);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix hadamard();
}  // namespace pauli

}  // namespace combclassic
