#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "combclassic/tensor.hpp"

namespace combclassic {

// A matrix with labeled tensor factors. Maps use the order (out..., in...).
struct ChoiState {
    ComplexMatrix matrix;
    FactorLayout layout;

    Index dim() const { return matrix.rows(); }
    Index output_dim() const;
    Index input_dim() const;
};

// Choi layout for a map C^din -> C^dout: factors (dout, out), (din, in).
ChoiState map_choi(ComplexMatrix m, Index dout, Index din);
// Same with the output and input spaces split into several factors.
ChoiState map_choi(ComplexMatrix m, const std::vector<Index>& out_dims, const std::vector<Index>& in_dims);

// Unnormalized Phi+ = sum |xx><yy| and D = sum |xx><xx|.
ChoiState identity_choi(Index dim);
ChoiState dephasing_choi(Index dim);

// M = sum_ab K|a><b|K^dag ⊗ |a><b|. Throws NotCP on a negative eigenvalue.
ChoiState choi_of_map(const std::vector<ComplexMatrix>& kraus, double tol = kDefaultTol);
ChoiState choi_of_linear(Index din, Index dout, const std::function<ComplexMatrix(const ComplexMatrix&)>& f);
ChoiState choi_of_unitary(const ComplexMatrix& u);

std::vector<ComplexMatrix> kraus_of_choi(const ChoiState& c, double cutoff = 1e-13);

ComplexMatrix apply_map(const ChoiState& c, const ComplexMatrix& x);
// (1_left ⊗ K) X (1_left ⊗ K)^dag summed over kraus, X on (left ⊗ din).
ComplexMatrix apply_kraus_right(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x, Index left);
// (K ⊗ 1_right) X (K ⊗ 1_right)^dag summed over kraus, X on (din ⊗ right).
ComplexMatrix apply_kraus_left(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x, Index right);

// vec is row-major: vec(X)[a*d + b] = X(a, b).
ComplexMatrix superoperator(const ChoiState& c);
ChoiState choi_of_superoperator(const ComplexMatrix& s, Index dout, Index din);

// second ∘ first
ChoiState compose(const ChoiState& second, const ChoiState& first);
// a ⊗ b acting on (a_in ⊗ b_in).
ChoiState tensor_maps(const ChoiState& a, const ChoiState& b);

bool is_cp(const ChoiState& c, double tol = kDefaultTol);
// tr_out(M) == 1_in
bool is_trace_preserving(const ChoiState& c, double tol = kDefaultTol);
bool is_cptp(const ChoiState& c, double tol = kDefaultTol);

// Shared pairs are (factor of a, factor of b). Result factors: unshared of a, then unshared of b.
ChoiState link_product(const ChoiState& a, const ChoiState& b, const std::vector<std::pair<int, int>>& shared);

bool is_density_matrix(const ComplexMatrix& rho, double tol = kDefaultTol);

}  // namespace combclassic
