#include "combclassic/classicality.hpp"

#include <algorithm>

namespace combclassic {

namespace {

std::size_t power(Index base, std::size_t exp) {
    std::size_t n = 1;
    for (std::size_t k = 0; k < exp; ++k) n *= static_cast<std::size_t>(base);
    return n;
}

Complex elementwise_pairing(const ComplexMatrix& op, const ComplexMatrix& m) {
    return (op.array() * m.array()).sum();
}

}  // namespace

ProbFamily projective_family(const Comb& c) {
    const int k = c.slots();
    const Index d = c.system_dim;
    const ComplexMatrix phi = identity_choi(d).matrix;
    std::vector<ComplexMatrix> proj;
    for (Index x = 0; x < d; ++x) proj.push_back(projector_choi(d, x).matrix);

    ProbFamily fam;
    fam.slots = k;
    fam.alphabet = d;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        ProbTable t = make_table(mask_slots(mask, k), d);
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
            const auto x = t.outcome(idx);
            std::vector<ComplexMatrix> ops(k, phi);
            for (std::size_t m = 0; m < t.slots.size(); ++m) ops[t.slots[m]] = proj[x[m]];
            const Complex p = pairing(c, ops);
            if (std::abs(p.imag()) > 1e-8) throw NonRealProbability("imaginary table entry");
            t.probs[idx] = p.real();
        }
        fam.tables[mask] = std::move(t);
    }
    return fam;
}

ClassicalityReport kolmogorov_check(const ProbFamily& family, double tol) {
    ClassicalityReport rep;
    rep.tol = tol;
    const unsigned full = (1u << family.slots) - 1u;
    for (unsigned mask = 0; mask <= full; ++mask) {
        auto it = family.tables.find(mask);
        if (it == family.tables.end()) throw InconsistentFamily("missing table for subset " + std::to_string(mask));
        const ProbTable& t = it->second;
        if (t.alphabet != family.alphabet || t.slots != mask_slots(mask, family.slots) ||
            t.size() != power(family.alphabet, t.slots.size()))
            throw InconsistentFamily("table for subset " + std::to_string(mask) + " has the wrong shape");
    }
    for (unsigned mask = 1; mask <= full; ++mask) {
        const ProbTable& t = family.tables.at(mask);
        for (int j : t.slots) {
            const ProbTable marg = t.marginalize(j);
            const ProbTable& smaller = family.tables.at(mask & ~(1u << j));
            for (std::size_t idx = 0; idx < marg.size(); ++idx) {
                const double v = std::abs(marg.probs[idx] - smaller.probs[idx]);
                if (v > rep.worst_violation) {
                    rep.worst_violation = v;
                    rep.witness = {mask, j, marg.outcome(idx)};
                }
            }
        }
    }
    rep.pass = rep.worst_violation <= tol;
    return rep;
}

ClassicalityReport kolmogorov_check(const Comb& c, double tol) { return kolmogorov_check(projective_family(c), tol); }

MarkovReport markov_check(const ProbTable& full, double tol) {
    MarkovReport rep;
    const int k = static_cast<int>(full.slots.size());
    // prefix[m]: distribution of the first m + 1 measured slots
    std::vector<ProbTable> prefix(k);
    prefix[k - 1] = full;
    for (int m = k - 2; m >= 0; --m) prefix[m] = prefix[m + 1].marginalize(full.slots[m + 1]);
    for (int m = 2; m < k; ++m) {
        const ProbTable& joint = prefix[m];
        const ProbTable& cond = prefix[m - 1];
        // Pair distribution of slots m-1 and m from the full prefix.
        ProbTable pair = joint;
        for (int r = 0; r < m - 1; ++r) pair = pair.marginalize(full.slots[r]);
        const ProbTable single = pair.marginalize(full.slots[m]);
        for (std::size_t idx = 0; idx < joint.size(); ++idx) {
            const auto x = joint.outcome(idx);
            const std::vector<Index> head(x.begin(), x.end() - 1);
            const double pc = cond.at(head);
            const double ps = single.at({x[m - 1]});
            if (pc < kConditioningFloor || ps < kConditioningFloor) {
                rep.skipped.emplace_back(full.slots[m], cond.index(head));
                continue;
            }
            const double lhs = joint.probs[idx] / pc;
            const double rhs = pair.at({x[m - 1], x[m]}) / ps;
            rep.worst_violation = std::max(rep.worst_violation, std::abs(lhs - rhs));
        }
    }
    rep.pass = rep.worst_violation <= tol;
    return rep;
}

namespace {

ComplexMatrix dephasing_superop(Index d) {
    ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
    for (Index x = 0; x < d; ++x) s(x * d + x, x * d + x) = 1.0;
    return s;
}

double choi_distance(const ComplexMatrix& s1, const ComplexMatrix& s2, Index dout, Index din) {
    return operator_norm(choi_of_superoperator(s1 - s2, dout, din).matrix);
}

}  // namespace

NcgdReport ncgd_check(const std::vector<ChoiState>& props, double tol) {
    NcgdReport rep;
    for (std::size_t j = 0; j + 1 < props.size(); ++j) {
        const Index d0 = props[j].input_dim(), d1 = props[j].output_dim(), d2 = props[j + 1].output_dim();
        if (props[j + 1].input_dim() != d1) throw DimensionMismatch("propagators do not compose");
        const ComplexMatrix a = superoperator(props[j]), b = superoperator(props[j + 1]);
        const ComplexMatrix D0 = dephasing_superop(d0), D1 = dephasing_superop(d1), D2 = dephasing_superop(d2);
        const ComplexMatrix lhs = D2 * b * D1 * a * D0;
        const ComplexMatrix rhs = D2 * b * a * D0;
        const double v = choi_distance(lhs, rhs, d2, d0);
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.worst_pair = static_cast<int>(j);
        }
    }
    rep.pass = rep.worst_violation <= tol;
    return rep;
}

bool invertibility_premise(const ComplexMatrix& rho0, const std::vector<ChoiState>& props, double tol) {
    const Index d = rho0.rows();
    for (Index a = 0; a < d; ++a) {
        if (rho0(a, a).real() <= tol) return false;
        for (Index b = 0; b < d; ++b)
            if (a != b && std::abs(rho0(a, b)) > tol) return false;
    }
    ComplexMatrix rho = rho0;
    for (const auto& p : props) {
        rho = apply_map(p, rho);
        for (Index a = 0; a < rho.rows(); ++a)
            if (rho(a, a).real() <= tol) return false;
    }
    return true;
}

ComplexMatrix system_dephasing_superop(Index ds, Index de) {
    const Index n = ds * de;
    ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            if (a / de == b / de) s(a * n + b, a * n + b) = 1.0;
    return s;
}

NcgdReport ndgd_check(const Dilation& d, double tol) {
    validate_dilation(d, tol);
    NcgdReport rep;
    const Index ds = d.system_dim;
    for (int j = 0; j + 1 < d.slots(); ++j) {
        const ComplexMatrix a = superoperator(d.maps[j]), b = superoperator(d.maps[j + 1]);
        const ComplexMatrix D0 = system_dephasing_superop(ds, d.env_dims[j]);
        const ComplexMatrix D1 = system_dephasing_superop(ds, d.env_dims[j + 1]);
        const ComplexMatrix D2 = system_dephasing_superop(ds, d.env_dims[j + 2]);
        const ComplexMatrix lhs = D2 * b * D1 * a * D0;
        const ComplexMatrix rhs = D2 * b * a * D0;
        const double v = choi_distance(lhs, rhs, ds * d.env_dims[j + 2], ds * d.env_dims[j]);
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.worst_pair = j;
        }
    }
    rep.pass = rep.worst_violation <= tol;
    return rep;
}

Dilation ndgd_sandwich(const Dilation& d) {
    validate_dilation(d);
    const Index ds = d.system_dim;
    Dilation out = d;
    out.initial_state = dephase_system(apply_map(d.maps[0], d.initial_state), ds);
    out.env_dims[0] = d.env_dims[1];
    const Index n1 = ds * d.env_dims[1];
    out.maps[0] = choi_of_superoperator(system_dephasing_superop(ds, d.env_dims[1]), n1, n1);
    for (int j = 1; j < d.slots(); ++j) {
        const ComplexMatrix s = system_dephasing_superop(ds, d.env_dims[j + 1]) * superoperator(d.maps[j]) *
                                system_dephasing_superop(ds, d.env_dims[j]);
        out.maps[j] = choi_of_superoperator(s, ds * d.env_dims[j + 1], ds * d.env_dims[j]);
        out.maps[j].layout = d.maps[j].layout;
    }
    return out;
}

ChiDecomposition decompose_classical(const Comb& c) {
    const int k = c.slots();
    const Index d = c.system_dim;
    ComplexMatrix diag = ComplexMatrix::Zero(c.choi.rows(), c.choi.cols());
    for (Index r = 0; r < c.choi.rows(); ++r) {
        Index rest = r;
        bool classical = true;
        for (int j = 0; j < k; ++j) {
            const Index i = rest % d;
            rest /= d;
            const Index o = rest % d;
            rest /= d;
            classical = classical && (i == o);
        }
        if (classical) diag(r, r) = c.choi(r, r).real();
    }
    ChiDecomposition out{make_comb(diag, k, d, c.times, true), c.choi - diag};
    return out;
}

ChiReport chi_constraints_check(const ComplexMatrix& chi, const FactorLayout& layout, double tol) {
    layout.validate(chi.rows());
    const int k = static_cast<int>(layout.size() / 2);
    const Index d = layout.factors.front().dim;
    const ComplexMatrix a = identity_choi(d).matrix - dephasing_choi(d).matrix;
    std::vector<ComplexMatrix> proj;
    for (Index x = 0; x < d; ++x) proj.push_back(projector_choi(d, x).matrix);

    ChiReport rep;
    for (unsigned amask = 1; amask < (1u << k); ++amask) {
        const auto rest = mask_slots(((1u << k) - 1u) & ~amask, k);
        ProbTable shape = make_table(rest, d);
        for (std::size_t idx = 0; idx < shape.size(); ++idx) {
            const auto x = shape.outcome(idx);
            std::vector<ComplexMatrix> ops(k, a);
            for (std::size_t m = 0; m < rest.size(); ++m) ops[rest[m]] = proj[x[m]];
            std::vector<ComplexMatrix> order(ops.rbegin(), ops.rend());
            const double v = std::abs(elementwise_pairing(kron_all(order), chi));
            if (v > rep.worst_violation) {
                rep.worst_violation = v;
                rep.subset = amask;
                rep.outcome = x;
            }
        }
    }
    rep.pass = rep.worst_violation <= tol;
    return rep;
}

bool zero_discord_check(const ComplexMatrix& state, Index system_dim, double tol) {
    if (state.rows() % system_dim != 0) throw DimensionMismatch("state dimension");
    if (!is_density_matrix(state, std::max(tol, kDefaultTol))) throw NotAState("zero_discord_check input");
    return (dephase_system(state, system_dim) - state).cwiseAbs().maxCoeff() <= tol;
}

bool dzero_map_check(const ChoiState& g, Index ds, double tol) {
    if (!is_cptp(g, std::max(tol, kDefaultTol))) throw NotCptp("dzero_map_check input");
    const Index din = g.input_dim();
    if (din % ds != 0 || g.output_dim() % ds != 0) throw DimensionMismatch("map is not on system ⊗ environment");
    const Index de = din / ds;
    std::vector<ComplexMatrix> env;
    const double s = 1.0 / std::sqrt(2.0);
    for (Index m = 0; m < de; ++m) {
        env.push_back(projector(basis_ket(de, m)));
        for (Index n = m + 1; n < de; ++n) {
            env.push_back(projector(s * (basis_ket(de, m) + basis_ket(de, n))));
            env.push_back(projector(s * (basis_ket(de, m) + Complex(0, 1) * basis_ket(de, n))));
        }
    }
    for (Index l = 0; l < ds; ++l) {
        const ComplexMatrix pl = projector(basis_ket(ds, l));
        for (const auto& eta : env)
            if (!zero_discord_check(apply_map(g, kron(pl, eta)), ds, tol)) return false;
    }
    return true;
}

ProbFamily markov_table_from_propagators(const ComplexMatrix& rho0, const std::vector<ChoiState>& props) {
    const int k = static_cast<int>(props.size());
    if (k < 1) throw DimensionMismatch("no propagators");
    const Index d = rho0.rows();
    for (const auto& p : props)
        if (p.input_dim() != d || p.output_dim() != d) throw DimensionMismatch("propagator dimension");
    ProbFamily fam;
    fam.slots = k;
    fam.alphabet = d;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        ProbTable t = make_table(mask_slots(mask, k), d);
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
            const auto x = t.outcome(idx);
            ComplexMatrix rho = rho0;
            std::size_t m = 0;
            for (int j = 0; j < k; ++j) {
                rho = apply_map(props[j], rho);
                if (mask & (1u << j)) {
                    const Index v = x[m++];
                    const Complex keep = rho(v, v);
                    rho.setZero();
                    rho(v, v) = keep;
                }
            }
            t.probs[idx] = rho.trace().real();
        }
        fam.tables[mask] = std::move(t);
    }
    return fam;
}

}  // namespace combclassic
