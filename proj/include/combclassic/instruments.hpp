#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "combclassic/channel.hpp"

namespace combclassic {

struct Instrument {
    std::vector<ChoiState> elements;
    Index dim = 0;
    std::vector<std::string> labels;

    std::size_t size() const { return elements.size(); }
    ChoiState total() const;
    // Some element is proportional to a CPTP map.
    bool pathological(double tol = kDefaultTol) const;
};

// Checks PSD elements and a trace-preserving sum. Throws NotCP / NotCptp.
void validate_instrument(const Instrument& inst, double tol = kDefaultTol);
Instrument make_instrument(std::vector<ChoiState> elements, std::vector<std::string> labels = {},
                           double tol = kDefaultTol);

// Element proportional to a CPTP Choi: tr_out(M) ∝ 1_in with a positive constant.
bool proportional_to_cptp(const ChoiState& m, double tol = kDefaultTol);

ChoiState projector_choi(Index dim, Index x);
Instrument projective_instrument(Index dim);
// Single-element CPTP instruments.
Instrument identity_instrument(Index dim);
Instrument dephasing_instrument(Index dim);

// Lüders form when `repreparation` is empty, else rho_x tr[E_x ·]. Throws NotPovm.
Instrument povm_instrument(const std::vector<ComplexMatrix>& povm,
                           const std::vector<ComplexMatrix>& repreparation = {}, double tol = kDefaultTol);

// Groups must partition {0..n-1}.
Instrument coarse_grain(const Instrument& inst, const std::vector<std::vector<std::size_t>>& grouping);

struct BlochPovm {
    double r0 = 0.5;
    std::array<double, 3> r{0.0, 0.0, 0.0};

    double norm() const;
    bool valid(double tol = 1e-12) const;
    // r0·1 + r·σ and (1 − r0)·1 − r·σ
    std::array<ComplexMatrix, 2> elements() const;
    Instrument instrument() const;
};

}  // namespace combclassic
