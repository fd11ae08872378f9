#include "combclassic/channel.hpp"

#include <Eigen/Eigenvalues>

namespace combclassic {

namespace {

Index port_product(const FactorLayout& l, Port p) {
    Index n = 1;
    bool any = false;
    for (const auto& f : l.factors)
        if (f.port == p) {
            n *= f.dim;
            any = true;
        }
    return any ? n : 0;
}

}  // namespace

Index ChoiState::output_dim() const {
    const Index n = port_product(layout, Port::out);
    return n ? n : 1;
}

Index ChoiState::input_dim() const {
    const Index n = port_product(layout, Port::in);
    return n ? n : 1;
}

ChoiState map_choi(ComplexMatrix m, Index dout, Index din) {
    return map_choi(std::move(m), std::vector<Index>{dout}, std::vector<Index>{din});
}

ChoiState map_choi(ComplexMatrix m, const std::vector<Index>& out_dims, const std::vector<Index>& in_dims) {
    ChoiState c{std::move(m), {}};
    for (Index d : out_dims) c.layout.factors.push_back({d, -1, Port::out});
    for (Index d : in_dims) c.layout.factors.push_back({d, -1, Port::in});
    c.layout.validate(c.matrix.rows());
    return c;
}

ChoiState identity_choi(Index dim) {
    ComplexMatrix m = ComplexMatrix::Zero(dim * dim, dim * dim);
    for (Index x = 0; x < dim; ++x)
        for (Index y = 0; y < dim; ++y) m(x * dim + x, y * dim + y) = 1.0;
    return map_choi(std::move(m), dim, dim);
}

ChoiState dephasing_choi(Index dim) {
    ComplexMatrix m = ComplexMatrix::Zero(dim * dim, dim * dim);
    for (Index x = 0; x < dim; ++x) m(x * dim + x, x * dim + x) = 1.0;
    return map_choi(std::move(m), dim, dim);
}

ChoiState choi_of_linear(Index din, Index dout, const std::function<ComplexMatrix(const ComplexMatrix&)>& f) {
    ComplexMatrix m = ComplexMatrix::Zero(dout * din, dout * din);
    for (Index a = 0; a < din; ++a)
        for (Index b = 0; b < din; ++b) {
            ComplexMatrix e = ComplexMatrix::Zero(din, din);
            e(a, b) = 1.0;
            const ComplexMatrix img = f(e);
            if (img.rows() != dout || img.cols() != dout) throw DimensionMismatch("map output size");
            for (Index o = 0; o < dout; ++o)
                for (Index p = 0; p < dout; ++p) m(o * din + a, p * din + b) = img(o, p);
        }
    return map_choi(std::move(m), dout, din);
}

ChoiState choi_of_map(const std::vector<ComplexMatrix>& kraus, double tol) {
    if (kraus.empty()) throw DimensionMismatch("empty Kraus list");
    const Index dout = kraus.front().rows(), din = kraus.front().cols();
    for (const auto& k : kraus)
        if (k.rows() != dout || k.cols() != din) throw DimensionMismatch("Kraus operators differ in shape");
    // Column (o, a) of the vectorized Kraus operator is K(o, a).
    ComplexMatrix m = ComplexMatrix::Zero(dout * din, dout * din);
    for (const auto& k : kraus) {
        Eigen::VectorXcd v(dout * din);
        for (Index o = 0; o < dout; ++o)
            for (Index a = 0; a < din; ++a) v(o * din + a) = k(o, a);
        m += v * v.adjoint();
    }
    if (hermitian_eigenvalues(m).minCoeff() < -tol) throw NotCP("Choi matrix has a negative eigenvalue");
    return map_choi(std::move(m), dout, din);
}

ChoiState choi_of_unitary(const ComplexMatrix& u) { return choi_of_map({u}); }

std::vector<ComplexMatrix> kraus_of_choi(const ChoiState& c, double cutoff) {
    const Index dout = c.output_dim(), din = c.input_dim();
    const ComplexMatrix h = 0.5 * (c.matrix + c.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<ComplexMatrix> out;
    for (Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
        const double lam = es.eigenvalues()(k);
        if (lam <= cutoff * scale) continue;
        ComplexMatrix kr(dout, din);
        for (Index o = 0; o < dout; ++o)
            for (Index a = 0; a < din; ++a) kr(o, a) = std::sqrt(lam) * es.eigenvectors()(o * din + a, k);
        out.push_back(std::move(kr));
    }
    if (out.empty()) out.push_back(ComplexMatrix::Zero(dout, din));
    return out;
}

ComplexMatrix apply_map(const ChoiState& c, const ComplexMatrix& x) {
    const Index dout = c.output_dim(), din = c.input_dim();
    if (x.rows() != din || x.cols() != din) throw DimensionMismatch("map input dimension");
    ComplexMatrix y = ComplexMatrix::Zero(dout, dout);
    for (Index a = 0; a < din; ++a)
        for (Index b = 0; b < din; ++b) {
            const Complex xab = x(a, b);
            if (xab == Complex(0)) continue;
            for (Index p = 0; p < dout; ++p)
                for (Index o = 0; o < dout; ++o) y(o, p) += xab * c.matrix(o * din + a, p * din + b);
        }
    return y;
}

ComplexMatrix apply_kraus_right(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x, Index left) {
    const Index din = kraus.front().cols(), dout = kraus.front().rows();
    if (x.rows() != left * din || x.cols() != left * din) throw DimensionMismatch("operand dimension");
    ComplexMatrix acc = ComplexMatrix::Zero(left * dout, left * dout);
    for (const auto& k : kraus) {
        // Column-major storage makes (1 ⊗ K) X a single product on a reshaped view.
        ComplexMatrix kx(left * dout, left * din);
        Eigen::Map<const ComplexMatrix> xv(x.data(), din, left * left * din);
        Eigen::Map<ComplexMatrix>(kx.data(), dout, left * left * din).noalias() = k * xv;
        ComplexMatrix kxa = kx.adjoint();
        ComplexMatrix r(left * dout, left * dout);
        Eigen::Map<ComplexMatrix>(r.data(), dout, left * left * dout).noalias() =
            k * Eigen::Map<const ComplexMatrix>(kxa.data(), din, left * left * dout);
        acc += r.adjoint();
    }
    return acc;
}

ComplexMatrix apply_kraus_left(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x, Index right) {
    const Index din = kraus.front().cols(), dout = kraus.front().rows();
    if (x.rows() != right * din || x.cols() != right * din) throw DimensionMismatch("operand dimension");
    const ComplexMatrix id = ComplexMatrix::Identity(right, right);
    ComplexMatrix acc = ComplexMatrix::Zero(right * dout, right * dout);
    for (const auto& k : kraus) {
        const ComplexMatrix big = kron(k, id);
        acc.noalias() += big * x * big.adjoint();
    }
    return acc;
}

ComplexMatrix superoperator(const ChoiState& c) {
    const Index dout = c.output_dim(), din = c.input_dim();
    ComplexMatrix s(dout * dout, din * din);
    for (Index o = 0; o < dout; ++o)
        for (Index p = 0; p < dout; ++p)
            for (Index a = 0; a < din; ++a)
                for (Index b = 0; b < din; ++b) s(o * dout + p, a * din + b) = c.matrix(o * din + a, p * din + b);
    return s;
}

ChoiState choi_of_superoperator(const ComplexMatrix& s, Index dout, Index din) {
    if (s.rows() != dout * dout || s.cols() != din * din) throw DimensionMismatch("superoperator shape");
    ComplexMatrix m(dout * din, dout * din);
    for (Index o = 0; o < dout; ++o)
        for (Index p = 0; p < dout; ++p)
            for (Index a = 0; a < din; ++a)
                for (Index b = 0; b < din; ++b) m(o * din + a, p * din + b) = s(o * dout + p, a * din + b);
    return map_choi(std::move(m), dout, din);
}

ChoiState compose(const ChoiState& second, const ChoiState& first) {
    if (second.input_dim() != first.output_dim()) throw DimensionMismatch("maps do not compose");
    return choi_of_superoperator(superoperator(second) * superoperator(first), second.output_dim(),
                                 first.input_dim());
}

ChoiState tensor_maps(const ChoiState& a, const ChoiState& b) {
    const Index ao = a.output_dim(), ai = a.input_dim(), bo = b.output_dim(), bi = b.input_dim();
    const ComplexMatrix k = kron(a.matrix, b.matrix);
    // (ao, ai, bo, bi) -> (ao, bo, ai, bi)
    return map_choi(permute_factors(k, {ao, ai, bo, bi}, {0, 2, 1, 3}), {ao, bo}, {ai, bi});
}

bool is_cp(const ChoiState& c, double tol) { return is_psd(c.matrix, tol); }

bool is_trace_preserving(const ChoiState& c, double tol) {
    const Index dout = c.output_dim(), din = c.input_dim();
    const ComplexMatrix t = partial_trace(c.matrix, std::vector<Index>{dout, din}, {0});
    return (t - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff() <= tol;
}

bool is_cptp(const ChoiState& c, double tol) { return is_cp(c, tol) && is_trace_preserving(c, tol); }

ChoiState link_product(const ChoiState& a, const ChoiState& b, const std::vector<std::pair<int, int>>& shared) {
    const auto ad = a.layout.dims(), bd = b.layout.dims();
    std::set<int> as, bs;
    std::vector<int> sa, sb;
    for (auto [i, j] : shared) {
        if (i < 0 || j < 0 || i >= static_cast<int>(ad.size()) || j >= static_cast<int>(bd.size()))
            throw DimensionMismatch("shared factor index out of range");
        if (ad[i] != bd[j]) throw DimensionMismatch("shared factors differ in dimension");
        as.insert(i);
        bs.insert(j);
        sa.push_back(i);
        sb.push_back(j);
    }
    const auto ka = detail::complement(static_cast<int>(ad.size()), as);
    const auto kb = detail::complement(static_cast<int>(bd.size()), bs);
    std::vector<int> pa = ka, pb = sb;
    pa.insert(pa.end(), sa.begin(), sa.end());
    pb.insert(pb.end(), kb.begin(), kb.end());
    const ComplexMatrix A = permute_factors(a.matrix, ad, pa);
    const ComplexMatrix B = permute_factors(b.matrix, bd, pb);
    Index na = 1, nb = 1, ns = 1;
    for (int k : ka) na *= ad[k];
    for (int k : kb) nb *= bd[k];
    for (int k : sa) ns *= ad[k];

    // R[(ra,rb),(ca,cb)] = sum_{s,s'} A[(ra,s'),(ca,s)] B[(s',rb),(s,cb)]
    ComplexMatrix at(na * na, ns * ns), bt(ns * ns, nb * nb);
    for (Index ra = 0; ra < na; ++ra)
        for (Index ca = 0; ca < na; ++ca)
            for (Index s1 = 0; s1 < ns; ++s1)
                for (Index s = 0; s < ns; ++s) at(ra * na + ca, s1 * ns + s) = A(ra * ns + s1, ca * ns + s);
    for (Index s1 = 0; s1 < ns; ++s1)
        for (Index s = 0; s < ns; ++s)
            for (Index rb = 0; rb < nb; ++rb)
                for (Index cb = 0; cb < nb; ++cb) bt(s1 * ns + s, rb * nb + cb) = B(s1 * nb + rb, s * nb + cb);
    const ComplexMatrix rt = at * bt;
    ComplexMatrix r(na * nb, na * nb);
    for (Index ra = 0; ra < na; ++ra)
        for (Index ca = 0; ca < na; ++ca)
            for (Index rb = 0; rb < nb; ++rb)
                for (Index cb = 0; cb < nb; ++cb) r(ra * nb + rb, ca * nb + cb) = rt(ra * na + ca, rb * nb + cb);

    ChoiState out{std::move(r), {}};
    for (int k : ka) out.layout.factors.push_back(a.layout.factors[k]);
    for (int k : kb) out.layout.factors.push_back(b.layout.factors[k]);
    return out;
}

bool is_density_matrix(const ComplexMatrix& rho, double tol) {
    if (rho.rows() != rho.cols()) return false;
    return is_psd(rho, tol) && std::abs(rho.trace() - Complex(1.0)) <= tol;
}

}  // namespace combclassic
