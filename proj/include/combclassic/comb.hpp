#pragma once

#include <map>
#include <set>
#include <vector>

#include "combclassic/channel.hpp"
#include "combclassic/instruments.hpp"
#include "combclassic/prob_table.hpp"

namespace combclassic {

// Factor order is (o_K, i_K, ..., o_1, i_1). Slot j (0-based, chronological)
// owns factors 2(K-1-j) (output fed back by the instrument) and 2(K-1-j)+1
// (system state handed to the instrument).
struct Comb {
    ComplexMatrix choi;
    FactorLayout layout;
    std::vector<double> times;
    Index system_dim = 2;
    bool relaxed = false;

    int slots() const { return static_cast<int>(layout.size() / 2); }
};

FactorLayout comb_layout(int slots, Index dim);
int out_factor(int slots, int slot);
int in_factor(int slots, int slot);
Comb make_comb(ComplexMatrix choi, int slots, Index dim, std::vector<double> times = {}, bool relaxed = false);

// Map j is Γ_{t_{j+1}, t_j} on (s ⊗ e_j) -> (s ⊗ e_{j+1}); env_dims has maps.size() + 1 entries.
struct Dilation {
    Index system_dim = 2;
    std::vector<Index> env_dims;
    ComplexMatrix initial_state;
    std::vector<ChoiState> maps;
    std::vector<double> times;

    int slots() const { return static_cast<int>(maps.size()); }
};

void validate_dilation(const Dilation& d, double tol = kDefaultTol);
Comb comb_from_dilation(const Dilation& d);

// Applies a system map (any linear map given by its Choi) to X on (s ⊗ right).
ComplexMatrix apply_system_map(const ChoiState& m, const ComplexMatrix& x, Index right);
ComplexMatrix dephase_system(const ComplexMatrix& x, Index system_dim);

// System-environment state after the last slot. ops are chronological; nullptr is the identity.
ComplexMatrix propagate(const Dilation& d, const std::vector<const ChoiState*>& ops);
// Same, stopping right before the instrument at `slot`.
ComplexMatrix propagate_until(const Dilation& d, const std::vector<const ChoiState*>& ops, int slot);
ComplexMatrix reduce_to_system(const ComplexMatrix& se, Index system_dim);

// tr[(M_K^T ⊗ ... ⊗ M_1^T) C] for chronological ops (each on (o, i) of its slot).
Complex pairing(const Comb& c, const std::vector<ComplexMatrix>& ops);
double born_probability(const Comb& c, const std::vector<ChoiState>& seq);

// Contracts the listed slots; remaining factors keep layout order.
ChoiState contract_slots(const Comb& c, const std::map<int, ComplexMatrix>& ops);
Comb marginal_comb(const Comb& c, const std::set<int>& drop_slots);
// Unnormalized system state at i_slot given operations at earlier slots.
// Earlier slots without an entry and all later slots get the identity.
ComplexMatrix slot_state(const Comb& c, int slot, const std::map<int, ComplexMatrix>& earlier);

ProbTable joint_table(const Comb& c, const std::vector<Instrument>& instruments);

struct CausalityReport {
    bool psd = false;
    bool normalized = false;
    bool hierarchy = false;
    bool relaxed = false;
    bool pass = false;
    double normalization_error = 0.0;
    // residuals[j]: slot j, max-abs distance of Θ_j from 1_{o_j} ⊗ tr_{o_j}Θ_j / d
    std::vector<double> residuals;
};

CausalityReport validate_comb(const Comb& c, double tol = kDefaultTol);

// Statistics of rotated measurement bases: projectors U|x><x|U^dag become computational.
Comb rotate_comb(const Comb& c, const ComplexMatrix& u);

}  // namespace combclassic
