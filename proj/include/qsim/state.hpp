// Dense state vectors over n qubits plus the fidelity measures used as the
// circuit accuracy metric throughout the project.
#pragma once

#include <cstdint>
#include <vector>

#include "qsim/gates.hpp"
#include "qsim/types.hpp"

namespace qsim {

// Complex amplitude vector of length 2^n. Qubit k = bit k of the index.
// Sub-normalized states are legal; operations that attenuate the norm say so.
struct PureState {
    int n = 0;
    std::vector<cplx> amps;

    static PureState basis(int n, std::uint64_t index);

    std::size_t dim() const { return amps.size(); }
};

double norm2(const PureState& s);           // squared 2-norm
cplx inner_product(const PureState& a, const PureState& b);

// Returns a new state with `gate` applied to `targets`; norm is preserved
// iff the gate is unitary. Throws on duplicate/out-of-range targets or an
// arity/target-count mismatch.
PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     std::span<const int> targets);
PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     std::initializer_list<int> targets);

// |<a|b>|^2 for normalized states of equal dimension.
double overlap_fidelity(const PureState& a, const PureState& b);

// Normalized state drawn from the unitarily invariant distribution.
// Deterministic for a fixed seed.
PureState haar_random_state(int n, std::uint64_t seed);

}  // namespace qsim
