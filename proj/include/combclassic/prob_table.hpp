#pragma once

#include <map>
#include <vector>

#include "combclassic/tensor.hpp"

namespace combclassic {

// Joint distribution over the measured slots. Outcome tuples are ordered
// lexicographically with the earliest slot most significant.
struct ProbTable {
    std::vector<int> slots;
    Index alphabet = 2;
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    std::vector<Index> outcome(std::size_t idx) const;
    std::size_t index(const std::vector<Index>& outcome) const;
    double at(const std::vector<Index>& outcome) const { return probs.at(index(outcome)); }
    double total() const;
    // Sum over the outcomes of one measured slot.
    ProbTable marginalize(int slot) const;
};

ProbTable make_table(std::vector<int> slots, Index alphabet);

// One table per measured-slot mask (bit j set = slot j measured).
struct ProbFamily {
    int slots = 0;
    Index alphabet = 2;
    std::map<unsigned, ProbTable> tables;

    const ProbTable& full() const { return tables.at((1u << slots) - 1u); }
};

std::vector<int> mask_slots(unsigned mask, int slots);

}  // namespace combclassic
