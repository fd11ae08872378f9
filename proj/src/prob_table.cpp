#include "combclassic/prob_table.hpp"

#include <algorithm>

namespace combclassic {

std::vector<Index> ProbTable::outcome(std::size_t idx) const {
    std::vector<Index> out(slots.size());
    for (std::size_t k = slots.size(); k-- > 0;) {
        out[k] = static_cast<Index>(idx % alphabet);
        idx /= alphabet;
    }
    return out;
}

std::size_t ProbTable::index(const std::vector<Index>& outcome) const {
    if (outcome.size() != slots.size()) throw DimensionMismatch("outcome tuple length");
    std::size_t idx = 0;
    for (Index x : outcome) {
        if (x < 0 || x >= alphabet) throw DimensionMismatch("outcome out of range");
        idx = idx * alphabet + static_cast<std::size_t>(x);
    }
    return idx;
}

double ProbTable::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

ProbTable ProbTable::marginalize(int slot) const {
    const auto it = std::find(slots.begin(), slots.end(), slot);
    if (it == slots.end()) throw DimensionMismatch("slot not measured in table");
    const std::size_t pos = static_cast<std::size_t>(it - slots.begin());
    std::vector<int> rest = slots;
    rest.erase(rest.begin() + static_cast<long>(pos));
    ProbTable out = make_table(rest, alphabet);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        auto x = outcome(i);
        x.erase(x.begin() + static_cast<long>(pos));
        out.probs[out.index(x)] += probs[i];
    }
    return out;
}

ProbTable make_table(std::vector<int> slots, Index alphabet) {
    ProbTable t;
    std::sort(slots.begin(), slots.end());
    t.slots = std::move(slots);
    t.alphabet = alphabet;
    std::size_t n = 1;
    for (std::size_t k = 0; k < t.slots.size(); ++k) n *= static_cast<std::size_t>(alphabet);
    t.probs.assign(n, 0.0);
    return t;
}

std::vector<int> mask_slots(unsigned mask, int slots) {
    std::vector<int> out;
    for (int j = 0; j < slots; ++j)
        if (mask & (1u << j)) out.push_back(j);
    return out;
}

}  // namespace combclassic
