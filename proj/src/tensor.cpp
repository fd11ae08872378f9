#include "combclassic/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace combclassic {

FactorLayout FactorLayout::plain(const std::vector<Index>& dims) {
    FactorLayout l;
    for (Index d : dims) l.factors.push_back({d, -1, Port::none});
    return l;
}

Index FactorLayout::dim() const {
    Index n = 1;
    for (const auto& f : factors) n *= f.dim;
    return n;
}

std::vector<Index> FactorLayout::dims() const {
    std::vector<Index> out;
    for (const auto& f : factors) out.push_back(f.dim);
    return out;
}

int FactorLayout::find(int slot, Port port) const {
    for (std::size_t k = 0; k < factors.size(); ++k)
        if (factors[k].slot == slot && factors[k].port == port) return static_cast<int>(k);
    return -1;
}

void FactorLayout::validate(Index expected) const {
    if (dim() != expected) throw LayoutMismatch("layout dimension " + std::to_string(dim()) +
                                                " vs matrix " + std::to_string(expected));
    for (std::size_t a = 0; a < factors.size(); ++a) {
        if (factors[a].dim < 1) throw LayoutMismatch("factor dimension < 1");
        if (factors[a].slot < 0 || factors[a].port == Port::none) continue;
        for (std::size_t b = a + 1; b < factors.size(); ++b)
            if (factors[b].slot == factors[a].slot && factors[b].port == factors[a].port)
                throw LayoutMismatch("duplicate (slot, port) label");
    }
}

FactorLayout FactorLayout::select(const std::vector<int>& keep) const {
    FactorLayout l;
    for (int k : keep) l.factors.push_back(factors.at(k));
    return l;
}

namespace detail {

Index product(const std::vector<Index>& dims) {
    return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

std::vector<Index> offsets(const std::vector<Index>& dims, const std::vector<int>& which) {
    const int n = static_cast<int>(dims.size());
    std::vector<Index> stride(n, 1);
    for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];
    std::vector<Index> out{0};
    for (int f : which) {
        std::vector<Index> next;
        next.reserve(out.size() * dims[f]);
        for (Index base : out)
            for (Index v = 0; v < dims[f]; ++v) next.push_back(base + v * stride[f]);
        out.swap(next);
    }
    return out;
}

std::vector<int> complement(int n, const std::set<int>& drop) {
    std::vector<int> keep;
    for (int k = 0; k < n; ++k)
        if (!drop.count(k)) keep.push_back(k);
    return keep;
}

}  // namespace detail

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

bool is_finite(const ComplexMatrix& m) { return m.allFinite(); }

double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

ComplexMatrix ket_bra(const Eigen::VectorXcd& ket, const Eigen::VectorXcd& bra) {
    return ket * bra.adjoint();
}

ComplexMatrix projector(const Eigen::VectorXcd& ket) { return ket * ket.adjoint(); }

Eigen::VectorXcd basis_ket(Index dim, Index k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(k) = 1.0;
    return v;
}

namespace pauli {

ComplexMatrix x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

ComplexMatrix z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix hadamard() {
    ComplexMatrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

}  // namespace pauli

}  // namespace combclassic
