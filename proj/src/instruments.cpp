#include "combclassic/instruments.hpp"

#include <Eigen/Eigenvalues>

namespace combclassic {

ChoiState Instrument::total() const {
    ChoiState t = elements.at(0);
    for (std::size_t k = 1; k < elements.size(); ++k) t.matrix += elements[k].matrix;
    return t;
}

bool proportional_to_cptp(const ChoiState& m, double tol) {
    const Index dout = m.output_dim(), din = m.input_dim();
    const ComplexMatrix t = partial_trace(m.matrix, std::vector<Index>{dout, din}, {0});
    const double c = t.trace().real() / static_cast<double>(din);
    if (c <= tol) return false;
    return (t / c - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff() <= tol;
}

bool Instrument::pathological(double tol) const {
    for (const auto& e : elements)
        if (proportional_to_cptp(e, tol)) return true;
    return false;
}

void validate_instrument(const Instrument& inst, double tol) {
    if (inst.elements.empty()) throw NotCptp("instrument has no elements");
    for (const auto& e : inst.elements) {
        if (e.output_dim() != inst.dim || e.input_dim() != inst.dim)
            throw DimensionMismatch("instrument element dimension");
        if (!is_cp(e, tol)) throw NotCP("instrument element is not positive");
    }
    if (!is_trace_preserving(inst.total(), tol)) throw NotCptp("instrument elements do not sum to a CPTP map");
}

Instrument make_instrument(std::vector<ChoiState> elements, std::vector<std::string> labels, double tol) {
    Instrument inst;
    inst.dim = elements.empty() ? 0 : elements.front().input_dim();
    inst.elements = std::move(elements);
    if (labels.empty())
        for (std::size_t k = 0; k < inst.elements.size(); ++k) labels.push_back(std::to_string(k));
    inst.labels = std::move(labels);
    validate_instrument(inst, tol);
    return inst;
}

ChoiState projector_choi(Index dim, Index x) {
    ComplexMatrix m = ComplexMatrix::Zero(dim * dim, dim * dim);
    m(x * dim + x, x * dim + x) = 1.0;
    return map_choi(std::move(m), dim, dim);
}

Instrument projective_instrument(Index dim) {
    if (dim < 2) throw BadParameter("projective instrument needs dim >= 2");
    std::vector<ChoiState> el;
    for (Index x = 0; x < dim; ++x) el.push_back(projector_choi(dim, x));
    return make_instrument(std::move(el));
}

Instrument identity_instrument(Index dim) { return make_instrument({identity_choi(dim)}, {"id"}); }

Instrument dephasing_instrument(Index dim) { return make_instrument({dephasing_choi(dim)}, {"deph"}); }

namespace {

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Instrument povm_instrument(const std::vector<ComplexMatrix>& povm, const std::vector<ComplexMatrix>& repreparation,
                           double tol) {
    if (povm.empty()) throw NotPovm("empty POVM");
    const Index d = povm.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : povm) {
        if (e.rows() != d || e.cols() != d) throw NotPovm("POVM elements differ in dimension");
        if (!is_psd(e, tol)) throw NotPovm("POVM element is not positive");
        sum += e;
    }
    if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) throw NotPovm("elements do not sum to 1");
    if (!repreparation.empty() && repreparation.size() != povm.size())
        throw NotPovm("one repreparation state per outcome required");

    std::vector<ChoiState> el;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        if (repreparation.empty()) {
            el.push_back(choi_of_map({psd_sqrt(povm[k])}, tol));
        } else {
            const ComplexMatrix& rho = repreparation[k];
            if (!is_density_matrix(rho, tol)) throw NotAState("repreparation state");
            // Choi of X -> tr[E X] rho is rho ⊗ E^T.
            el.push_back(map_choi(kron(rho, ComplexMatrix(povm[k].transpose())), rho.rows(), d));
        }
    }
    return make_instrument(std::move(el), {}, tol);
}

Instrument coarse_grain(const Instrument& inst, const std::vector<std::vector<std::size_t>>& grouping) {
    std::vector<int> seen(inst.size(), 0);
    std::vector<ChoiState> el;
    std::vector<std::string> labels;
    for (const auto& g : grouping) {
        if (g.empty()) throw BadParameter("empty group");
        ChoiState acc = inst.elements.at(g.front());
        acc.matrix.setZero();
        std::string label;
        for (std::size_t k : g) {
            if (k >= inst.size() || seen[k]++) throw BadParameter("grouping is not a partition");
            acc.matrix += inst.elements[k].matrix;
            label += (label.empty() ? "" : "+") + inst.labels.at(k);
        }
        el.push_back(std::move(acc));
        labels.push_back(label);
    }
    for (int s : seen)
        if (!s) throw BadParameter("grouping is not a partition");
    return make_instrument(std::move(el), std::move(labels));
}

double BlochPovm::norm() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

bool BlochPovm::valid(double tol) const {
    return r0 - norm() >= -tol && (1.0 - r0) - norm() >= -tol;
}

std::array<ComplexMatrix, 2> BlochPovm::elements() const {
    const ComplexMatrix rs = r[0] * pauli::x() + r[1] * pauli::y() + r[2] * pauli::z();
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    return {r0 * id + rs, (1.0 - r0) * id - rs};
}

Instrument BlochPovm::instrument() const {
    if (!valid()) throw NotPovm("Bloch POVM element is not positive");
    const auto e = elements();
    return povm_instrument({e[0], e[1]});
}

}  // namespace combclassic
