#include "combclassic/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace combclassic {

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix bell_projector() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return projector(v);
}

void require_increasing(const std::vector<double>& t) {
    for (std::size_t a = 1; a < t.size(); ++a)
        if (!(t[a] > t[a - 1])) throw BadTimes("times must be strictly increasing");
}

// Probe gaps: with probe_initial the first probe sits at times[0].
std::vector<double> probe_gaps(const std::vector<double>& times, bool probe_initial) {
    require_increasing(times);
    std::vector<double> gaps;
    if (probe_initial) {
        if (times.empty()) throw BadTimes("no probe times");
        gaps.push_back(0.0);
    } else if (times.size() < 2) {
        throw BadTimes("need t0 and at least one probe time");
    }
    for (std::size_t a = 1; a < times.size(); ++a) gaps.push_back(times[a] - times[a - 1]);
    return gaps;
}

std::vector<double> probe_times(const std::vector<double>& times, bool probe_initial) {
    return probe_initial ? times : std::vector<double>(times.begin() + 1, times.end());
}

Dilation finish(Dilation d) {
    validate_dilation(d);
    return d;
}

// s ⊗ e ⊗ flags -> s ⊗ e ⊗ flags ⊗ new flag. On active flag values the Bell outcome keeps φ+ and
// writes 0; any other outcome prepares bias ⊗ tau and writes 1. Inactive values pass through with 0.
ChoiState flag_bell_map(Index flags, const ComplexMatrix& bias, const ComplexMatrix& tau,
                        const std::function<bool(Index)>& active) {
    const ComplexMatrix phi = bell_projector();
    const ComplexMatrix biased = kron(bias, tau);
    const Index din = 4 * flags, dout = 2 * din;
    return choi_of_linear(din, dout, [&](const ComplexMatrix& x) {
        ComplexMatrix y = ComplexMatrix::Zero(dout, dout);
        for (Index c = 0; c < flags; ++c) {
            ComplexMatrix blk(4, 4);
            for (Index a = 0; a < 4; ++a)
                for (Index b = 0; b < 4; ++b) blk(a, b) = x(a * flags + c, b * flags + c);
            auto place = [&](const ComplexMatrix& m, Index flag) {
                for (Index a = 0; a < 4; ++a)
                    for (Index b = 0; b < 4; ++b) y((a * flags + c) * 2 + flag, (b * flags + c) * 2 + flag) += m(a, b);
            };
            if (active(c)) {
                const Complex keep = (phi * blk).trace();
                place(keep * phi, 0);
                place((blk.trace() - keep) * biased, 1);
            } else {
                place(blk, 0);
            }
        }
        return y;
    });
}

}  // namespace

MemoryKernel lorentzian_kernel(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw BadParameter("Lorentzian width must be positive");
    return {[gamma](double t) { return Complex(std::exp(-2.0 * gamma * std::abs(t)), 0.0); },
            "lorentzian gamma=" + std::to_string(gamma)};
}

MemoryKernel static_kernel() {
    return {[](double) { return Complex(1.0, 0.0); }, "static"};
}

MemoryKernel tabulated_kernel(std::vector<double> t, std::vector<Complex> k) {
    if (t.size() < 2 || t.size() != k.size()) throw BadParameter("kernel table needs matching nodes and values");
    if (t.front() != 0.0 || std::abs(k.front() - Complex(1.0)) > 1e-12) throw BadParameter("kernel table must start at k(0) = 1");
    for (std::size_t a = 1; a < t.size(); ++a)
        if (!(t[a] > t[a - 1])) throw BadParameter("kernel nodes must increase");
    for (const auto& v : k)
        if (std::abs(v) > 1.0 + 1e-12) throw BadParameter("|k| exceeds 1");
    auto eval = [t = std::move(t), k = std::move(k)](double s) {
        const double a = std::abs(s);
        Complex v = k.back();
        if (a < t.back()) {
            const auto it = std::upper_bound(t.begin(), t.end(), a);
            const std::size_t hi = static_cast<std::size_t>(it - t.begin()), lo = hi - 1;
            const double f = (a - t[lo]) / (t[hi] - t[lo]);
            v = (1.0 - f) * k[lo] + f * k[hi];
        }
        return s < 0 ? std::conj(v) : v;
    };
    return {eval, "tabulated"};
}

Complex EnvGrid::kernel(double t) const {
    Complex s(0.0, 0.0);
    for (std::size_t m = 0; m < p.size(); ++m) s += w[m] * std::exp(Complex(0.0, 2.0 * p[m] * t));
    return s;
}

EnvGrid lorentzian_grid(double gamma, const GridOptions& opt) {
    if (!(gamma > 0.0)) throw BadParameter("Lorentzian width must be positive");
    if (opt.points < 2 || opt.tail_points < 0 || !(opt.cutoff > 0.0)) throw BadParameter("grid options");
    const double L = opt.cutoff * gamma;
    const double h = 2.0 * L / (opt.points - 1);
    EnvGrid g;
    for (int m = 0; m < opt.points; ++m) {
        const double p = -L + m * h;
        const double end = (m == 0 || m == opt.points - 1) ? 0.5 : 1.0;
        g.p.push_back(p);
        g.w.push_back(end * h * gamma / (kPi * (gamma * gamma + p * p)));
    }
    // |p| > L with p = L/v: density ΓL / (π(Γ²v² + L²)) on v in (0, 1].
    for (int m = 0; m < opt.tail_points; ++m) {
        const double v = (m + 0.5) / opt.tail_points;
        const double w = gamma * L / (kPi * (gamma * gamma * v * v + L * L)) / opt.tail_points;
        g.p.push_back(L / v);
        g.w.push_back(w);
        g.p.push_back(-L / v);
        g.w.push_back(w);
    }
    return g;
}

Comb dephasing_comb_z(const MemoryKernel& k, const std::vector<double>& times, const ComplexMatrix& rho0,
                      bool probe_initial) {
    if (rho0.rows() != 2 || !is_density_matrix(rho0)) throw NotAState("initial qubit state");
    const std::vector<double> tau = probe_gaps(times, probe_initial);
    const int K = static_cast<int>(tau.size());
    const Index n = Index(1) << (2 * K);
    auto phase = [](int l) { return l == 0 ? 1 : -1; };

    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    std::vector<int> ri(K), ro(K), ci(K), co(K);
    auto decode = [K](Index r, std::vector<int>& in, std::vector<int>& out) {
        for (int j = 0; j < K; ++j) {
            in[j] = static_cast<int>(r & 1);
            r >>= 1;
            out[j] = static_cast<int>(r & 1);
            r >>= 1;
        }
    };
    auto chained = [K](const std::vector<int>& in, const std::vector<int>& out) {
        for (int j = 1; j < K; ++j)
            if (in[j] != out[j - 1]) return false;
        return true;
    };
    for (Index r = 0; r < n; ++r) {
        decode(r, ri, ro);
        if (!chained(ri, ro)) continue;
        for (Index col = 0; col < n; ++col) {
            decode(col, ci, co);
            if (!chained(ci, co) || ro[K - 1] != co[K - 1]) continue;
            double arg = 0.0;
            for (int j = 0; j < K; ++j) arg += 0.5 * (phase(ri[j]) - phase(ci[j])) * tau[j];
            c(r, col) = rho0(ri[0], ci[0]) * k(arg);
        }
    }
    return make_comb(std::move(c), K, 2, probe_times(times, probe_initial));
}

Comb dephasing_comb(const MemoryKernel& k, const std::vector<double>& times, const ComplexMatrix& rho0,
                    bool probe_initial) {
    return rotate_comb(dephasing_comb_z(k, times, rho0, probe_initial), pauli::hadamard());
}

double dephasing_grid_probability(const EnvGrid& grid, const std::vector<double>& times, const ComplexMatrix& rho0,
                                  const std::vector<ChoiState>& ops, bool probe_initial) {
    const std::vector<double> tau = probe_gaps(times, probe_initial);
    if (ops.size() != tau.size()) throw DimensionMismatch("one operation per probe time required");
    double total = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        ComplexMatrix rho = rho0;
        for (std::size_t a = 0; a < tau.size(); ++a) {
            const Complex u0 = std::exp(Complex(0.0, grid.p[m] * tau[a]));
            rho(0, 1) *= u0 * u0;
            rho(1, 0) *= std::conj(u0 * u0);
            rho = apply_map(ops[a], rho);
        }
        total += grid.w[m] * rho.trace().real();
    }
    return total;
}

ComplexMatrix example1_initial_state(double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw BadParameter("alpha must lie in [0, 1]");
    const ComplexMatrix h = pauli::hadamard();
    return h * Eigen::Vector2cd(alpha, 1.0 - alpha).asDiagonal() * h;
}

ComplexMatrix example1_joint_state(const MemoryKernel& k, const EnvGrid& grid, double t, double alpha) {
    const Index n = static_cast<Index>(grid.size());
    Eigen::VectorXcd fp(n), fm(n);
    for (Index m = 0; m < n; ++m) {
        const Complex ph = std::exp(Complex(0.0, grid.p[m] * t));
        fp(m) = std::sqrt(grid.w[m]) * ph;
        fm(m) = std::sqrt(grid.w[m]) * std::conj(ph);
    }
    const Complex overlap = fm.dot(fp);
    if (std::abs(overlap - k(t)) > 1e-3)
        throw GridTooCoarse("grid overlap " + std::to_string(std::abs(overlap)) + " misses k(t)");

    // Orthonormal basis of span{φ+, φ-}.
    const Eigen::VectorXcd e0 = fp.normalized();
    Eigen::VectorXcd rest = fm - e0.dot(fm) * e0;
    const double rn = rest.norm();
    std::array<Eigen::Vector2cd, 2> f;
    f[0] = Eigen::Vector2cd(e0.dot(fp), 0.0);
    f[1] = Eigen::Vector2cd(e0.dot(fm), rn > 1e-12 ? (rest / rn).dot(fm) : Complex(0.0));

    const ComplexMatrix rho = example1_initial_state(alpha);
    ComplexMatrix se = ComplexMatrix::Zero(4, 4);
    for (int l = 0; l < 2; ++l)
        for (int lp = 0; lp < 2; ++lp)
            se += rho(l, lp) * kron(ket_bra(basis_ket(2, l), basis_ket(2, lp)), ket_bra(f[l], f[lp]));
    se /= se.trace();
    const ComplexMatrix w = kron(pauli::hadamard(), ComplexMatrix::Identity(2, 2));
    return w * se * w;
}

Dilation appendix_d_dilation() {
    const ComplexMatrix phi = bell_projector();
    Dilation d;
    d.system_dim = 2;
    d.env_dims = {2, 2, 1};
    d.initial_state = phi;
    d.maps.push_back(choi_of_unitary(ComplexMatrix::Identity(4, 4)));
    d.maps.push_back(choi_of_linear(4, 2, [&](const ComplexMatrix& x) {
        const Complex keep = (phi * x).trace();
        ComplexMatrix y = ComplexMatrix::Zero(2, 2);
        y(0, 0) = keep;
        y(1, 1) = x.trace() - keep;
        return y;
    }));
    d.times = {0.0, 1.0, 2.0};
    return finish(std::move(d));
}

Comb appendix_d_comb() { return comb_from_dilation(appendix_d_dilation()); }

Dilation appendix_g_dilation(double theta) {
    const ComplexMatrix phi = bell_projector();
    Dilation d;
    d.system_dim = 2;
    d.env_dims = {2, 2, 2, 2};
    Eigen::VectorXcd plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    d.initial_state = kron(projector(basis_ket(2, 0)), projector(plus));

    // CNOT with the environment as control: |s, e> -> |s xor e, e>.
    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    for (int s = 0; s < 2; ++s)
        for (int e = 0; e < 2; ++e) cnot(((s ^ e) << 1) | e, (s << 1) | e) = 1.0;
    d.maps.push_back(choi_of_unitary(cnot));

    const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
    d.maps.push_back(choi_of_linear(4, 4, [&](const ComplexMatrix& x) {
        const Complex keep = (phi * x).trace();
        return ComplexMatrix(keep * kron(half, projector(basis_ket(2, 0))) +
                             (x.trace() - keep) * kron(half, projector(basis_ket(2, 1))));
    }));

    const ComplexMatrix xz = kron(pauli::x(), pauli::z());
    const ComplexMatrix u = std::cos(theta) * ComplexMatrix::Identity(4, 4) - Complex(0.0, std::sin(theta)) * xz;
    d.maps.push_back(choi_of_unitary(u));
    d.times = {0.0, 1.0, 2.0, 3.0};
    return finish(std::move(d));
}

Comb appendix_g_comb(double theta) { return comb_from_dilation(appendix_g_dilation(theta)); }

Dilation genuinely_quantum_process(bool tau_e_zero) {
    const ComplexMatrix tau = tau_e_zero ? projector(basis_ket(2, 0)) : ComplexMatrix(ComplexMatrix::Identity(2, 2) / 2.0);
    Eigen::VectorXcd minus_y(2), minus_x(2);
    minus_y << 1.0 / std::sqrt(2.0), Complex(0.0, -1.0 / std::sqrt(2.0));
    minus_x << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);

    Dilation d;
    d.system_dim = 2;
    d.env_dims = {2, 2, 4, 8, 16};
    d.initial_state = bell_projector();
    d.maps.push_back(choi_of_unitary(ComplexMatrix::Identity(4, 4)));
    d.maps.push_back(flag_bell_map(1, projector(basis_ket(2, 0)), tau, [](Index) { return true; }));
    d.maps.push_back(flag_bell_map(2, projector(minus_y), tau, [](Index z) { return z == 0; }));
    d.maps.push_back(flag_bell_map(4, projector(minus_x), tau, [](Index zy) { return zy == 0; }));
    d.times = {0.0, 1.0, 2.0, 3.0, 4.0};
    return finish(std::move(d));
}

Comb genuinely_quantum_comb(bool tau_e_zero) { return comb_from_dilation(genuinely_quantum_process(tau_e_zero)); }

ComplexMatrix final_system_state(const Dilation& d, const std::vector<int>& where, const ChoiState& map) {
    std::vector<const ChoiState*> ops(d.slots(), nullptr);
    for (int j : where) {
        if (j < 0 || j >= d.slots() - 1) throw BadParameter("history slot out of range");
        ops[j] = &map;
    }
    return reduce_to_system(propagate_until(d, ops, d.slots() - 1), d.system_dim);
}

double bell_fidelity(const ChoiState& m) {
    const ComplexMatrix phi = bell_projector();
    return (phi * apply_system_map(m, phi, 2)).trace().real();
}

std::string SweepReport::csv() const {
    std::ostringstream out;
    out << "r0,rx,ry,rz,deviation\n";
    char buf[160];
    for (const auto& pt : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.povm.r0, pt.povm.r[0], pt.povm.r[1],
                      pt.povm.r[2], pt.deviation);
        out << buf;
    }
    return out.str();
}

std::vector<BlochPovm> bloch_grid(int r0_levels, int directions, int radii) {
    if (r0_levels < 1 || directions < 1 || radii < 2) throw BadParameter("sweep grid sizes");
    std::vector<std::array<double, 3>> dirs;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int m = 0; m < directions; ++m) {
        const double z = 1.0 - 2.0 * (m + 0.5) / directions;
        const double rho = std::sqrt(1.0 - z * z);
        dirs.push_back({rho * std::cos(golden * m), rho * std::sin(golden * m), z});
    }
    std::vector<BlochPovm> out;
    for (int l = 0; l < r0_levels; ++l) {
        const double r0 = (l + 1.0) / (r0_levels + 1.0);
        const double rmax = std::min(r0, 1.0 - r0);
        out.push_back({r0, {0.0, 0.0, 0.0}});
        for (const auto& u : dirs)
            for (int q = 1; q < radii; ++q) {
                const double r = rmax * q / (radii - 1);
                out.push_back({r0, {r * u[0], r * u[1], r * u[2]}});
            }
        for (int m = 0; m < std::min(directions, 4); ++m)
            for (double r : {1e-7, 1e-3}) out.push_back({r0, {r * dirs[m][0], r * dirs[m][1], r * dirs[m][2]}});
    }
    return out;
}

SweepReport povm_classicality_sweep(const Dilation& process, const std::vector<BlochPovm>& grid, double tol) {
    const ChoiState deph = dephasing_choi(process.system_dim);
    const ComplexMatrix base = final_system_state(process, {}, deph);
    std::vector<ComplexMatrix> shifts;
    for (int j = 0; j + 1 < process.slots(); ++j) shifts.push_back(final_system_state(process, {j}, deph) - base);

    SweepReport rep;
    rep.tol = tol;
    rep.fitted_c = std::numeric_limits<double>::infinity();
    rep.min_deviation_far = std::numeric_limits<double>::infinity();
    for (const auto& povm : grid) {
        if (!povm.valid()) throw NotPovm("Bloch point outside the POVM region");
        SweepPoint pt{povm, 0.0, -1};
        for (const auto& e : povm.elements())
            for (std::size_t h = 0; h < shifts.size(); ++h) {
                const double v = std::abs((e * shifts[h]).trace());
                if (v > pt.deviation) {
                    pt.deviation = v;
                    pt.history = static_cast<int>(h);
                }
            }
        const double r = povm.norm();
        if (r > 0.0) rep.fitted_c = std::min(rep.fitted_c, pt.deviation / (r * r));
        if (pt.deviation <= tol) rep.max_blind_radius = std::max(rep.max_blind_radius, r);
        if (r >= 0.05) rep.min_deviation_far = std::min(rep.min_deviation_far, pt.deviation);
        rep.points.push_back(pt);
    }
    if (!std::isfinite(rep.fitted_c)) rep.fitted_c = 0.0;
    rep.certified = rep.fitted_c > 0.0 && rep.min_deviation_far > tol && rep.max_blind_radius <= 1e-6;
    return rep;
}

double Rng::uniform() {
    // 53 random bits in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

Complex Rng::complex_normal() {
    const double re = normal();
    return {re, normal()};
}

ComplexMatrix random_unitary(Rng& rng, Index dim) {
    ComplexMatrix g(dim, dim);
    for (Index c = 0; c < dim; ++c)
        for (Index r = 0; r < dim; ++r) g(r, c) = rng.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j) {
        const Complex d = rr(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

ComplexMatrix random_state(Rng& rng, Index dim) {
    ComplexMatrix g(dim, dim);
    for (Index c = 0; c < dim; ++c)
        for (Index r = 0; r < dim; ++r) g(r, c) = rng.complex_normal();
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

Dilation random_dilation(std::uint64_t seed, Index system_dim, Index env_dim, int slots) {
    if (slots < 1 || system_dim < 2 || env_dim < 1) throw BadParameter("random dilation sizes");
    Rng rng(seed);
    Dilation d;
    d.system_dim = system_dim;
    d.env_dims.assign(slots + 1, env_dim);
    d.initial_state = random_state(rng, system_dim * env_dim);
    for (int j = 0; j < slots; ++j) d.maps.push_back(choi_of_unitary(random_unitary(rng, system_dim * env_dim)));
    for (int j = 0; j <= slots; ++j) d.times.push_back(j);
    return d;
}

Comb random_comb(std::uint64_t seed, Index system_dim, Index env_dim, int slots) {
    return comb_from_dilation(random_dilation(seed, system_dim, env_dim, slots));
}

Comb random_classical_comb(std::uint64_t seed, Index dim, int slots) {
    if (slots < 1 || dim < 2) throw BadParameter("random classical comb sizes");
    Rng rng(seed);
    // tables[j][h * dim + i]: P(i_j = i | history h of earlier (i, o) pairs)
    std::vector<std::vector<double>> tables(slots);
    Index hist = 1;
    for (int j = 0; j < slots; ++j) {
        auto& t = tables[j];
        t.resize(hist * dim);
        for (Index h = 0; h < hist; ++h) {
            double s = 0.0;
            for (Index i = 0; i < dim; ++i) s += t[h * dim + i] = rng.uniform() + 0.05;
            for (Index i = 0; i < dim; ++i) t[h * dim + i] /= s;
        }
        hist *= dim * dim;
    }
    const Index n = hist;
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (Index r = 0; r < n; ++r) {
        double v = 1.0;
        Index prefix = 1;
        for (int j = 0; j < slots; ++j) {
            const Index h = r % prefix;
            const Index i = (r / prefix) % dim;
            v *= tables[j][h * dim + i];
            prefix *= dim * dim;
        }
        c(r, r) = v;
    }
    std::vector<double> times;
    for (int j = 1; j <= slots; ++j) times.push_back(j);
    return make_comb(std::move(c), slots, dim, std::move(times));
}

Dilation random_ndgd_dilation(std::uint64_t seed, Index system_dim, Index env_dim, int slots) {
    return ndgd_sandwich(random_dilation(seed, system_dim, env_dim, slots));
}

std::vector<ChoiState> random_ncgd_propagators(std::uint64_t seed, Index dim, int count, double eps) {
    if (eps < 0.0 || eps > 1.0) throw BadParameter("mixing weight must lie in [0, 1]");
    Rng rng(seed);
    std::vector<ChoiState> out;
    for (int j = 0; j < count; ++j) {
        ComplexMatrix mp = ComplexMatrix::Zero(dim * dim, dim * dim);
        for (Index a = 0; a < dim; ++a) {
            const ComplexMatrix sigma = random_state(rng, dim);
            for (Index o = 0; o < dim; ++o)
                for (Index p = 0; p < dim; ++p) mp(o * dim + a, p * dim + a) = sigma(o, p);
        }
        Eigen::VectorXcd phases(dim);
        for (Index a = 0; a < dim; ++a) phases(a) = std::exp(Complex(0.0, 2.0 * kPi * rng.uniform()));
        const ChoiState u = choi_of_unitary(phases.asDiagonal().toDenseMatrix());
        out.push_back(map_choi((1.0 - eps) * mp + eps * u.matrix, dim, dim));
    }
    return out;
}

ComplexMatrix random_diagonal_state(Rng& rng, Index dim) {
    Eigen::VectorXd p(dim);
    for (Index a = 0; a < dim; ++a) p(a) = rng.uniform() + 0.1;
    p /= p.sum();
    return p.cast<Complex>().asDiagonal();
}

std::vector<ChoiState> hadamard_pair_propagators() {
    const ChoiState h = choi_of_unitary(pauli::hadamard());
    return {choi_of_unitary(ComplexMatrix::Identity(2, 2)), h, h};
}

}  // namespace combclassic
