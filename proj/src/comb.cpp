#include "combclassic/comb.hpp"

#include <algorithm>

namespace combclassic {

FactorLayout comb_layout(int slots, Index dim) {
    FactorLayout l;
    for (int j = slots - 1; j >= 0; --j) {
        l.factors.push_back({dim, j, Port::out});
        l.factors.push_back({dim, j, Port::in});
    }
    return l;
}

int out_factor(int slots, int slot) { return 2 * (slots - 1 - slot); }
int in_factor(int slots, int slot) { return 2 * (slots - 1 - slot) + 1; }

Comb make_comb(ComplexMatrix choi, int slots, Index dim, std::vector<double> times, bool relaxed) {
    if (slots < 1) throw DimensionMismatch("comb needs at least one slot");
    Comb c;
    c.layout = comb_layout(slots, dim);
    c.layout.validate(choi.rows());
    require_square(choi);
    if (!times.empty() && static_cast<int>(times.size()) != slots) throw BadTimes("one time stamp per slot");
    c.choi = std::move(choi);
    c.times = std::move(times);
    c.system_dim = dim;
    c.relaxed = relaxed;
    return c;
}

void validate_dilation(const Dilation& d, double tol) {
    const int k = d.slots();
    if (k < 1) throw DimensionMismatch("dilation has no maps");
    if (static_cast<int>(d.env_dims.size()) != k + 1) throw DimensionMismatch("env_dims needs maps + 1 entries");
    const Index ds = d.system_dim;
    if (d.initial_state.rows() != ds * d.env_dims[0]) throw DimensionMismatch("initial state dimension");
    if (!is_psd(d.initial_state, tol) || std::abs(d.initial_state.trace() - Complex(1.0)) > 1e-12)
        throw NotAState("initial system-environment state");
    for (int j = 0; j < k; ++j) {
        const auto& m = d.maps[j];
        if (m.input_dim() != ds * d.env_dims[j] || m.output_dim() != ds * d.env_dims[j + 1])
            throw DimensionMismatch("map " + std::to_string(j) + " dimensions");
        if (!is_cptp(m, tol)) throw NotCptp("map " + std::to_string(j));
    }
    if (!d.times.empty() && static_cast<int>(d.times.size()) != k && static_cast<int>(d.times.size()) != k + 1)
        throw BadTimes("dilation times");
}

Comb comb_from_dilation(const Dilation& d) {
    validate_dilation(d);
    const Index ds = d.system_dim;
    const int k = d.slots();
    const ComplexMatrix phi = identity_choi(ds).matrix;
    ComplexMatrix x = d.initial_state;
    Index ports = 1;
    for (int j = 0; j < k; ++j) {
        x = apply_kraus_right(kraus_of_choi(d.maps[j]), x, ports);
        const Index ne = d.env_dims[j + 1];
        if (j + 1 < k) {
            // (ports, i_j, e) ⊗ Φ+(o_j, s') -> (o_j, i_j, ports, s', e)
            x = permute_factors(kron(x, phi), {ports, ds, ne, ds, ds}, {3, 1, 0, 4, 2});
            ports *= ds * ds;
        } else {
            x = partial_trace(x, std::vector<Index>{ports, ds, ne}, {2});
            x = permute_factors(x, {ports, ds}, {1, 0});
            x = kron(ComplexMatrix::Identity(ds, ds), x);
        }
    }
    std::vector<double> times = d.times;
    if (static_cast<int>(times.size()) == k + 1) times.erase(times.begin());
    return make_comb(std::move(x), k, ds, std::move(times));
}

ComplexMatrix apply_system_map(const ChoiState& m, const ComplexMatrix& x, Index right) {
    const Index dout = m.output_dim(), din = m.input_dim();
    if (x.rows() != din * right) throw DimensionMismatch("system map input dimension");
    ComplexMatrix y = ComplexMatrix::Zero(dout * right, dout * right);
    for (Index a = 0; a < din; ++a)
        for (Index b = 0; b < din; ++b) {
            const auto blk = x.block(a * right, b * right, right, right);
            for (Index o = 0; o < dout; ++o)
                for (Index p = 0; p < dout; ++p) {
                    const Complex w = m.matrix(o * din + a, p * din + b);
                    if (w != Complex(0)) y.block(o * right, p * right, right, right) += w * blk;
                }
        }
    return y;
}

ComplexMatrix dephase_system(const ComplexMatrix& x, Index system_dim) {
    const Index right = x.rows() / system_dim;
    ComplexMatrix y = x;
    for (Index a = 0; a < system_dim; ++a)
        for (Index b = 0; b < system_dim; ++b)
            if (a != b) y.block(a * right, b * right, right, right).setZero();
    return y;
}

ComplexMatrix propagate_until(const Dilation& d, const std::vector<const ChoiState*>& ops, int slot) {
    ComplexMatrix x = d.initial_state;
    for (int j = 0; j <= slot; ++j) {
        x = apply_map(d.maps[j], x);
        if (j == slot) break;
        if (j < static_cast<int>(ops.size()) && ops[j]) x = apply_system_map(*ops[j], x, d.env_dims[j + 1]);
    }
    return x;
}

ComplexMatrix propagate(const Dilation& d, const std::vector<const ChoiState*>& ops) {
    const int k = d.slots();
    ComplexMatrix x = propagate_until(d, ops, k - 1);
    if (static_cast<int>(ops.size()) >= k && ops[k - 1]) x = apply_system_map(*ops[k - 1], x, d.env_dims[k]);
    return x;
}

ComplexMatrix reduce_to_system(const ComplexMatrix& se, Index system_dim) {
    return partial_trace(se, std::vector<Index>{system_dim, se.rows() / system_dim}, {1});
}

Complex pairing(const Comb& c, const std::vector<ComplexMatrix>& ops) {
    const int k = c.slots();
    if (static_cast<int>(ops.size()) != k) throw DimensionMismatch("one operation per slot required");
    std::vector<ComplexMatrix> order;
    for (int j = k - 1; j >= 0; --j) {
        if (ops[j].rows() != c.system_dim * c.system_dim) throw DimensionMismatch("operation dimension");
        order.push_back(ops[j]);
    }
    // tr[X^T C] = sum of the elementwise product.
    const ComplexMatrix big = kron_all(order);
    return (big.array() * c.choi.array()).sum();
}

double born_probability(const Comb& c, const std::vector<ChoiState>& seq) {
    std::vector<ComplexMatrix> ops;
    for (const auto& s : seq) ops.push_back(s.matrix);
    const Complex p = pairing(c, ops);
    if (std::abs(p.imag()) > 1e-8) throw NonRealProbability("imaginary part " + std::to_string(p.imag()));
    return std::clamp(p.real(), 0.0, 1.0);
}

ChoiState contract_slots(const Comb& c, const std::map<int, ComplexMatrix>& ops) {
    const int k = c.slots();
    const Index d = c.system_dim;
    std::vector<int> gone, keep;
    std::vector<ComplexMatrix> mats;
    std::set<int> drop;
    for (int j = k - 1; j >= 0; --j) {
        auto it = ops.find(j);
        if (it == ops.end()) continue;
        if (it->second.rows() != d * d) throw DimensionMismatch("operation dimension");
        gone.push_back(out_factor(k, j));
        gone.push_back(in_factor(k, j));
        drop.insert(out_factor(k, j));
        drop.insert(in_factor(k, j));
        mats.push_back(it->second);
    }
    for (const auto& [j, m] : ops)
        if (j < 0 || j >= k) throw DimensionMismatch("slot out of range");
    keep = detail::complement(2 * k, drop);
    std::vector<int> order = gone;
    order.insert(order.end(), keep.begin(), keep.end());
    const auto dims = c.layout.dims();
    const ComplexMatrix p = permute_factors(c.choi, dims, order);
    const ComplexMatrix m = kron_all(mats);
    const Index ns = m.rows(), nr = p.rows() / ns;
    // result(r, c) = sum_{s, s'} M(s', s) C[(s', r), (s, c)]
    ComplexMatrix out = ComplexMatrix::Zero(nr, nr);
    for (Index s = 0; s < ns; ++s)
        for (Index s1 = 0; s1 < ns; ++s1) {
            const Complex w = m(s1, s);
            if (w != Complex(0)) out += w * p.block(s1 * nr, s * nr, nr, nr);
        }
    return {std::move(out), c.layout.select(keep)};
}

Comb marginal_comb(const Comb& c, const std::set<int>& drop_slots) {
    if (drop_slots.empty()) return c;
    std::map<int, ComplexMatrix> ops;
    for (int j : drop_slots) ops[j] = identity_choi(c.system_dim).matrix;
    ChoiState r = contract_slots(c, ops);
    const int left = c.slots() - static_cast<int>(drop_slots.size());
    if (left < 1) throw DimensionMismatch("cannot drop every slot");
    std::vector<double> times;
    for (int j = 0; j < c.slots(); ++j)
        if (!drop_slots.count(j) && !c.times.empty()) times.push_back(c.times[j]);
    return make_comb(std::move(r.matrix), left, c.system_dim, std::move(times), c.relaxed);
}

ComplexMatrix slot_state(const Comb& c, int slot, const std::map<int, ComplexMatrix>& earlier) {
    const int k = c.slots();
    std::map<int, ComplexMatrix> ops = earlier;
    for (const auto& [j, m] : earlier)
        if (j >= slot) throw DimensionMismatch("operations must precede the slot");
    const ComplexMatrix id = identity_choi(c.system_dim).matrix;
    for (int j = 0; j < k; ++j)
        if (j != slot && !ops.count(j)) ops[j] = id;
    ChoiState r = contract_slots(c, ops);
    // Remaining factors: (o_slot, i_slot, ...) for slots not yet contracted; only slot is left.
    const Index d = c.system_dim;
    return partial_trace(r.matrix, std::vector<Index>{d, d}, {0}) / static_cast<double>(d);
}

ProbTable joint_table(const Comb& c, const std::vector<Instrument>& instruments) {
    const int k = c.slots();
    if (static_cast<int>(instruments.size()) != k) throw DimensionMismatch("one instrument per slot required");
    const Index a = static_cast<Index>(instruments.front().size());
    for (const auto& inst : instruments)
        if (static_cast<Index>(inst.size()) != a) throw DimensionMismatch("instruments differ in outcome count");
    std::vector<int> slots;
    for (int j = 0; j < k; ++j) slots.push_back(j);
    ProbTable t = make_table(slots, a);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        const auto x = t.outcome(idx);
        std::vector<ChoiState> seq;
        for (int j = 0; j < k; ++j) seq.push_back(instruments[j].elements[x[j]]);
        t.probs[idx] = born_probability(c, seq);
    }
    return t;
}

CausalityReport validate_comb(const Comb& c, double tol) {
    CausalityReport rep;
    rep.relaxed = c.relaxed;
    rep.psd = is_psd(c.choi, tol);
    const Index d = c.system_dim;
    const int k = c.slots();
    std::vector<ChoiState> deph(k, dephasing_choi(d));
    std::vector<ComplexMatrix> dm;
    for (const auto& s : deph) dm.push_back(s.matrix);
    rep.normalization_error = std::abs(pairing(c, dm) - Complex(1.0));
    rep.normalized = rep.normalization_error <= tol;

    ComplexMatrix theta = c.choi;
    bool ok = true;
    rep.residuals.assign(k, 0.0);
    for (int j = k - 1; j >= 0; --j) {
        const Index rest = theta.rows() / (d * d);
        const std::vector<Index> dims{d, d * rest};
        const ComplexMatrix s = partial_trace(theta, dims, {0}) / static_cast<double>(d);
        const ComplexMatrix back = kron(ComplexMatrix::Identity(d, d), s);
        rep.residuals[j] = (theta - back).cwiseAbs().maxCoeff();
        ok = ok && rep.residuals[j] <= tol;
        theta = partial_trace(s, std::vector<Index>{d, rest}, {0});
    }
    const double final_err = std::abs(theta(0, 0) - Complex(1.0));
    rep.hierarchy = ok && final_err <= tol;
    rep.pass = rep.psd && rep.normalized && rep.hierarchy;
    return rep;
}

Comb rotate_comb(const Comb& c, const ComplexMatrix& u) {
    const int k = c.slots();
    // C' = W C W^dag, W = ⊗ (U^T on o, U^dag on i)
    const ComplexMatrix wo = u.transpose(), wi = u.adjoint();
    std::vector<ComplexMatrix> ws;
    for (int j = 0; j < k; ++j) {
        ws.push_back(wo);
        ws.push_back(wi);
    }
    const ComplexMatrix w = kron_all(ws);
    Comb out = c;
    out.choi = w * c.choi * w.adjoint();
    return out;
}

}  // namespace combclassic
