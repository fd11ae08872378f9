// Acceptance run: one PASS/FAIL line per criterion, with the measured quantities and wall time.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "combclassic/classicality.hpp"
#include "combclassic/measure.hpp"
#include "combclassic/models.hpp"
#include "oracles.hpp"

using namespace combclassic;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double maxabs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

oracle::Chain chain_of(const Dilation& d) {
    oracle::Chain c{d.system_dim, d.env_dims, d.initial_state, {}};
    for (const auto& m : d.maps) c.maps.push_back(m.matrix);
    return c;
}

ComplexMatrix plus_minus(Index x) { return projector(pauli::hadamard().col(x)); }

void criterion1(Outcome& o) {
    const Comb c = appendix_d_comb();
    const double p1 = born_probability(c, {identity_choi(2), projector_choi(2, 0)});
    double marg = 0.0;
    for (Index x = 0; x < 2; ++x) marg += born_probability(c, {projector_choi(2, x), projector_choi(2, 0)});
    const ClassicalityReport k = kolmogorov_check(c);
    double coh = std::abs(slot_state(c, 0, {})(0, 1));
    for (const auto& op : {identity_choi(2), dephasing_choi(2), projector_choi(2, 0), projector_choi(2, 1)})
        coh = std::max(coh, std::abs(slot_state(c, 1, {{0, op.matrix}})(0, 1)));
    o.detail << "P(0@t2|id@t1)=" << p1 << " sum_x1 P(x1,0@t2)=" << marg << " worst=" << k.worst_violation
             << " max|offdiag|=" << coh;
    o.require(std::abs(p1 - 1.0) <= 1e-12, "P(0|id) = 1");
    o.require(std::abs(marg - 0.5) <= 1e-12, "marginal = 1/2");
    o.require(!k.pass && std::abs(k.worst_violation - 0.5) <= 1e-12, "Kolmogorov violation 0.5");
    o.require(coh <= 1e-12, "incoherent marginals");
}

void criterion2(Outcome& o) {
    const double gamma = 0.5;
    const MemoryKernel k = lorentzian_kernel(gamma);
    const ComplexMatrix rho = example1_initial_state(1.0);
    const std::vector<double> times{0.0, 1.0, 2.0};
    const Comb c = dephasing_comb(k, times, rho);
    const Comb c3 = dephasing_comb(k, times, rho, true);
    const EnvGrid g = lorentzian_grid(gamma);

    double grid_err = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        const double closed = born_probability(c, {projector_choi(2, s & 1), projector_choi(2, s >> 1)});
        const double oracle = oracle::mode_sum(g.p, g.w, {1.0, 1.0}, rho,
                                               {choi_of_map({plus_minus(s & 1)}).matrix, choi_of_map({plus_minus(s >> 1)}).matrix});
        grid_err = std::max(grid_err, std::abs(closed - oracle));
    }
    for (std::size_t s = 0; s < 8; ++s) {
        std::vector<ChoiState> seq;
        std::vector<oracle::CMat> lab;
        for (int j = 0; j < 3; ++j) {
            seq.push_back(projector_choi(2, (s >> j) & 1));
            lab.push_back(choi_of_map({plus_minus((s >> j) & 1)}).matrix);
        }
        grid_err = std::max(grid_err, std::abs(born_probability(c3, seq) - oracle::mode_sum(g.p, g.w, {0.0, 1.0, 1.0}, rho, lab)));
    }

    const double t1 = 1.0, tau = 2.0, r01 = 0.5;
    double formula_err = 0.0;
    for (int s : {+1, -1}) {
        const double cs = 1.0 + s * 2.0 * r01 * k(t1).real();
        const double ks = (k(tau - t1).real() + s * r01 * k(tau).real() + s * r01 * k(tau - 2.0 * t1).real()) / cs;
        const Index x = s > 0 ? 0 : 1;
        const double px = born_probability(c, {projector_choi(2, x), identity_choi(2)});
        const double joint = born_probability(c, {projector_choi(2, x), projector_choi(2, 0)});
        formula_err = std::max({formula_err, std::abs(px - cs / 2.0), std::abs(joint / px - (1.0 + s * ks) / 2.0)});
    }

    double coh = 0.0;
    for (int slot = 0; slot < 3; ++slot)
        for (unsigned h = 0; h < (1u << slot); ++h) {
            std::map<int, ComplexMatrix> earlier;
            for (int j = 0; j < slot; ++j) earlier[j] = projector_choi(2, (h >> j) & 1).matrix;
            coh = std::max(coh, std::abs(slot_state(c3, slot, earlier)(0, 1)));
        }
    const ClassicalityReport kr = kolmogorov_check(c3);
    o.detail << "grid_err=" << grid_err << " appB_err=" << formula_err << " max|offdiag|=" << coh
             << " kolmogorov_worst=" << kr.worst_violation;
    o.require(grid_err <= 1e-3, "grid oracle 1e-3");
    o.require(formula_err <= 1e-10, "conditional kernels 1e-10");
    o.require(coh <= 1e-10, "sigma-x diagonal branches");
    o.require(!kr.pass, "Kolmogorov fails");
}

void criterion3(Outcome& o) {
    int ok = 0;
    double worst_ndgd = 0.0, worst_k = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Dilation d = ndgd_sandwich(random_dilation(seed, 2, 2, 3));
        const NcgdReport n = ndgd_check(d, 1e-9);
        const ClassicalityReport k = kolmogorov_check(comb_from_dilation(d), 1e-9);
        worst_ndgd = std::max(worst_ndgd, n.worst_violation);
        worst_k = std::max(worst_k, k.worst_violation);
        ok += n.pass && k.pass && zero_discord_check(d.initial_state, 2, 1e-9);
    }
    o.detail << ok << "/50 pass, worst ndgd=" << worst_ndgd << " worst kolmogorov=" << worst_k;
    o.require(ok == 50, "all 50 dilations");
}

void criterion4(Outcome& o) {
    const NcgdReport n = ndgd_check(appendix_g_dilation(), 1e-9);
    const ClassicalityReport k = kolmogorov_check(appendix_g_comb(), 1e-9);
    o.detail << "ndgd=" << (n.pass ? "true" : "false") << " (violation " << n.worst_violation << "), kolmogorov worst="
             << k.worst_violation;
    o.require(!n.pass, "not NDGD");
    o.require(k.pass, "classical statistics");
}

void criterion5(Outcome& o) {
    double worst_classical = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        worst_classical = std::max(worst_classical, std::abs(measure(random_classical_comb(seed, 2, 2)).M));

    const MeasureResult d = measure(appendix_d_comb(), true, true);
    const oracle::Chain ch = chain_of(appendix_d_dilation());
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
                ops[measured[m]] = oracle::CMat::Zero(4, 4);
                ops[measured[m]](v * 3, v * 3) = 1.0;
            }
            b(r) = oracle::probability(ch, ops);
            for (Index y = 0; y < 4; ++y)
                a(r, y) = (x[0] < 0 || x[0] == (y >> 1)) && (x[1] < 0 || x[1] == (y & 1)) ? 1.0 : 0.0;
        }
        alpha.push_back(a);
        beta.push_back(b);
    }
    const double enumerated = oracle::vertex_enumeration(alpha, beta).value;

    int agree = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Comb c = seed % 3 == 0   ? random_classical_comb(seed, 2, 2)
                       : seed % 3 == 1 ? random_comb(seed, 2, 2, 2)
                                       : comb_from_dilation(random_ndgd_dilation(seed, 2, 2, 2));
        agree += (measure(c).M <= 1e-9) == kolmogorov_check(c, 1e-9).pass;
    }
    o.detail << "max classical M=" << worst_classical << "; appD primal=" << d.primal << " dual=" << *d.dual
             << " oracle=" << enumerated << " M=" << d.M << " bound=" << *d.bound << "; faithful " << agree << "/30";
    o.require(worst_classical <= 1e-9, "(a) classical combs M = 0");
    o.require(*d.gap <= 1e-7, "(b) strong duality");
    o.require(std::abs(d.primal - enumerated) <= 1e-8, "(b) vertex enumeration");
    o.require(std::abs(*d.bound - 1.0) <= 1e-12 && d.M <= *d.bound + 1e-9, "(c) M <= bound = 1");
    o.require(agree == 30, "(d) faithfulness");
}

void criterion6(Outcome& o) {
    const ComplexMatrix bell = identity_choi(2).matrix / 2.0;
    const double p = (bell * oracle::apply_first(dephasing_choi(2).matrix, 2, 2, bell, 2)).trace().real();
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd mx(2), my(2);
    mx << s, -s;
    my << s, Complex(0.0, -s);
    const std::vector<ComplexMatrix> bias{projector(basis_ket(2, 0)), projector(my), projector(mx)};

    double state_err = 0.0;
    std::vector<SweepReport> reps;
    const auto grid = bloch_grid();
    for (bool zero : {false, true}) {
        const Dilation d = genuinely_quantum_process(zero);
        state_err = std::max(state_err, maxabs(final_system_state(d, {}, dephasing_choi(2)) - ComplexMatrix::Identity(2, 2) / 2.0));
        for (int slot = 0; slot < 3; ++slot) {
            const ComplexMatrix expect = p / 2.0 * ComplexMatrix::Identity(2, 2) + (1.0 - p) * bias[slot];
            state_err = std::max(state_err, maxabs(final_system_state(d, {slot}, dephasing_choi(2)) - expect));
        }
        reps.push_back(povm_classicality_sweep(d, grid, 1e-9));
    }
    double swap = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        swap = std::max(swap, std::abs(reps[0].points[k].deviation - reps[1].points[k].deviation));
    o.detail << "p=" << p << " state_err=" << state_err << " points=" << grid.size() << " c=" << reps[0].fitted_c
             << " min_dev(|r|>=0.05)=" << reps[0].min_deviation_far << " blind_radius=" << reps[0].max_blind_radius
             << " tau_e_swap_diff=" << swap;
    o.require(state_err <= 1e-10, "final states");
    o.require(grid.size() >= 1000, ">= 1000 Bloch points");
    o.require(reps[0].certified && reps[0].min_deviation_far > 1e-9 && reps[0].max_blind_radius <= 1e-6, "sweep certified");
    o.require(reps[1].certified && swap <= 1e-9, "stable under tau_e swap");
}

void criterion7(Outcome& o) {
    std::vector<Comb> combs;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) combs.push_back(random_comb(seed, 2, 2, 2));
    combs.push_back(dephasing_comb(lorentzian_kernel(0.5), {0.0, 1.0, 2.0}, example1_initial_state(1.0), true));
    combs.push_back(appendix_d_comb());
    combs.push_back(appendix_g_comb());
    combs.push_back(genuinely_quantum_comb());
    int agree = 0, classical = 0;
    for (const auto& c : combs) {
        const bool k = kolmogorov_check(c, 1e-9).pass;
        agree += chi_constraints_check(decompose_classical(c).chi, c.layout, 1e-9).pass == k;
        classical += k;
    }
    o.detail << agree << "/" << combs.size() << " verdicts agree (" << classical << " classical)";
    o.require(agree == static_cast<int>(combs.size()), "chi constraints match Kolmogorov");
}

void criterion8(Outcome& o) {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        const ComplexMatrix rho0 = random_diagonal_state(rng, 2);
        const auto props = random_ncgd_propagators(seed, 2, 3);
        ok += ncgd_check(props, 1e-9).pass && kolmogorov_check(markov_table_from_propagators(rho0, props), 1e-9).pass;
    }
    Rng rng(1234);
    const ComplexMatrix rho0 = random_diagonal_state(rng, 2);
    const auto hp = hadamard_pair_propagators();
    const bool premise = invertibility_premise(rho0, hp);
    const NcgdReport n = ncgd_check(hp, 1e-9);
    const ClassicalityReport k = kolmogorov_check(markov_table_from_propagators(rho0, hp), 1e-9);
    o.detail << ok << "/50 NCGD families classical; Hadamard pair: premise=" << premise << " ncgd violation="
             << n.worst_violation << " kolmogorov violation=" << k.worst_violation;
    o.require(ok == 50, "NCGD families classical");
    o.require(premise, "invertibility premise");
    o.require(!n.pass && !k.pass, "Hadamard pair fails both");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> all{
        {1, "Appendix D reproduction", 1.0, criterion1},
        {2, "dephasing model", 10.0, criterion2},
        {3, "NDGD sufficiency", 30.0, criterion3},
        {4, "Appendix G separation", 1.0, criterion4},
        {5, "LP measure", 60.0, criterion5},
        {6, "genuinely quantum process", 30.0, criterion6},
        {7, "chi constraints vs Kolmogorov", 30.0, criterion7},
        {8, "NCGD and Kolmogorov", 10.0, criterion8},
    };
    int failed = 0;
    for (const auto& c : all) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) {
            o.pass = false;
            o.detail << " [over time limit " << c.limit_s << " s]";
        }
        failed += !o.pass;
        std::printf("%s %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    }
    return failed == 0 ? 0 : 1;
}
