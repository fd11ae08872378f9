#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "combclassic/classicality.hpp"
#include "combclassic/comb.hpp"

namespace combclassic {

// k(t) = ∫ dp |f(p)|² e^{2ipt}
struct MemoryKernel {
    std::function<Complex(double)> evaluator;
    std::string description;

    Complex operator()(double t) const { return evaluator(t); }
};

// e^{-2Γ|t|}. Throws BadParameter unless gamma > 0.
MemoryKernel lorentzian_kernel(double gamma);
// k ≡ 1, the Γ -> 0 limit.
MemoryKernel static_kernel();
// Linear interpolation of k on |t|, constant past the last node. Throws BadParameter on bad tables.
MemoryKernel tabulated_kernel(std::vector<double> t, std::vector<Complex> k);

// Discretized |f(p)|²: trapezoid body on [-cutoff·Γ, cutoff·Γ] plus midpoint tail nodes in v = L/|p|.
struct EnvGrid {
    std::vector<double> p;
    std::vector<double> w;

    std::size_t size() const { return p.size(); }
    Complex kernel(double t) const;
};

struct GridOptions {
    int points = 4096;
    double cutoff = 50.0;  // in units of Γ
    int tail_points = 4096;
};

EnvGrid lorentzian_grid(double gamma, const GridOptions& opt = {});

// Example-1 comb on the probe times, expressed so computational projectors are σx projectors
// (index 0 is |+>). With probe_initial the first slot sits at times[0], else probes start at times[1].
// Throws BadTimes unless times are strictly increasing.
Comb dephasing_comb(const MemoryKernel& k, const std::vector<double>& times, const ComplexMatrix& rho0,
                    bool probe_initial = false);
// Same process in the σz frame, before the basis rotation.
Comb dephasing_comb_z(const MemoryKernel& k, const std::vector<double>& times, const ComplexMatrix& rho0,
                      bool probe_initial = false);

// Probability of an operation sequence (lab-frame Chois, chronological) from direct propagation of
// every environment mode.
double dephasing_grid_probability(const EnvGrid& grid, const std::vector<double>& times, const ComplexMatrix& rho0,
                                  const std::vector<ChoiState>& ops, bool probe_initial = false);

// α|+><+| + (1 − α)|-><-|
ComplexMatrix example1_initial_state(double alpha);

// ρ_se(t) with the environment compressed onto span{φ+(t), φ-(t)}, system rotated to the σx frame.
// Throws GridTooCoarse when <φ-|φ+> on the grid misses k(t) by more than 1e-3.
ComplexMatrix example1_joint_state(const MemoryKernel& k, const EnvGrid& grid, double t, double alpha);

Dilation appendix_d_dilation();
Comb appendix_d_comb();

inline constexpr double kAppendixGTheta = 0.3;
Dilation appendix_g_dilation(double theta = kAppendixGTheta);
Comb appendix_g_comb(double theta = kAppendixGTheta);

// Flags z, y, x are appended to the environment in that order: env dims 2, 2, 4, 8, 16.
// tau_e is I/2 unless tau_e_zero selects |0><0|.
Dilation genuinely_quantum_process(bool tau_e_zero = false);
Comb genuinely_quantum_comb(bool tau_e_zero = false);

// System state right before the final probe, with `map` applied at the slots in `where` and the identity elsewhere.
ComplexMatrix final_system_state(const Dilation& d, const std::vector<int>& where, const ChoiState& map);
// tr[φ+ (M ⊗ 1)[φ+]] for a qubit map M.
double bell_fidelity(const ChoiState& m);

struct SweepPoint {
    BlochPovm povm;
    double deviation = 0.0;
    int history = -1;  // slot whose dephasing gives the deviation
};

struct SweepReport {
    std::vector<SweepPoint> points;
    double fitted_c = 0.0;  // min deviation / |r|² over |r| > 0
    double tol = kDefaultTol;
    // Largest |r| among points with deviation <= tol, and smallest deviation among |r| >= 0.05.
    double max_blind_radius = 0.0;
    double min_deviation_far = 0.0;
    bool certified = false;

    std::string csv() const;
};

// r0 levels in (0,1), Fibonacci directions, and radii as fractions of min(r0, 1 − r0), plus r = 0 and tiny radii.
std::vector<BlochPovm> bloch_grid(int r0_levels = 5, int directions = 40, int radii = 6);
SweepReport povm_classicality_sweep(const Dilation& process, const std::vector<BlochPovm>& grid,
                                    double tol = kDefaultTol);

// mt19937_64 with Box–Muller normals, so draws do not depend on the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform();
    double normal();
    Complex complex_normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// QR of a complex Ginibre matrix with the phases of R's diagonal divided out.
ComplexMatrix random_unitary(Rng& rng, Index dim);
// G G^dag / tr.
ComplexMatrix random_state(Rng& rng, Index dim);
// Random system-environment state and unitaries on s ⊗ e.
Dilation random_dilation(std::uint64_t seed, Index system_dim, Index env_dim, int slots);
Comb random_comb(std::uint64_t seed, Index system_dim, Index env_dim, int slots);
// Diagonal comb from a random classical process with memory.
Comb random_classical_comb(std::uint64_t seed, Index dim, int slots);
// Random dilation whose maps are dephasing-sandwiched and whose initial state is discord free.
Dilation random_ndgd_dilation(std::uint64_t seed, Index system_dim, Index env_dim, int slots);

// (1 − eps)·measure-and-prepare with coherent outputs + eps·diagonal-phase unitary. NCGD by construction.
std::vector<ChoiState> random_ncgd_propagators(std::uint64_t seed, Index dim, int count, double eps = 0.3);
// Diagonal full-rank state.
ComplexMatrix random_diagonal_state(Rng& rng, Index dim);
// Identity then two Hadamards: fails NCGD and Kolmogorov with a full-rank diagonal ρ0.
std::vector<ChoiState> hadamard_pair_propagators();

}  // namespace combclassic
