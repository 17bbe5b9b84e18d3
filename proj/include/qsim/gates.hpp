// Small dense gate matrices (1 or 2 target qubits) and the standard
// constructors used by the circuits in this project.
#pragma once

#include <array>
#include <span>

#include "qsim/types.hpp"

namespace qsim {

// Row-major complex matrix over 1 or 2 qubits. `unitary` records whether the
// matrix is an isometry; non-unitary instances are used as Kraus operators.
struct GateMatrix {
    int arity = 1;
    std::array<cplx, 16> m{};
    bool unitary = true;

    int dim() const { return 1 << arity; }

    cplx& at(int row, int col) { return m[static_cast<std::size_t>(row * dim() + col)]; }
    const cplx& at(int row, int col) const {
        return m[static_cast<std::size_t>(row * dim() + col)];
    }
};

GateMatrix identity_gate(int arity);
GateMatrix hadamard_gate();

// diag(1, 1, 1, e^{-i theta}); the phase convention matches the noisy
// controlled-phase sampler in noise.hpp.
GateMatrix cphase_gate(double theta);

// [[cos a, sin a], [-sin a, cos a]]
GateMatrix planar_rotation(double angle);

// c = a * b (same arity).
GateMatrix gate_product(const GateMatrix& a, const GateMatrix& b);

GateMatrix gate_adjoint(const GateMatrix& g);

// Max-entry residual of g†g - I.
double unitarity_residual(const GateMatrix& g);

bool is_unitary(const GateMatrix& g, double tol = 1e-12);

// Applies `gate` to the target qubits of a 2^n-amplitude vector in place.
// Qubit k corresponds to bit k of the basis-state index (LSB = qubit 0);
// this convention is fixed here and used project-wide. For a 2-qubit gate
// the matrix index is (bit of targets[1]) << 1 | (bit of targets[0]).
void apply_gate_span(std::span<cplx> amps, const GateMatrix& gate,
                     std::span<const int> targets, int n);

}  // namespace qsim
