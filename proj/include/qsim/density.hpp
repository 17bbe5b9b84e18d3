// Dense density matrices. Only used at oracle/test scale (n <= ~8); the
// production evolution path is the low-rank factor in lowrank.hpp.
#pragma once

#include <Eigen/Dense>

#include "qsim/gates.hpp"
#include "qsim/state.hpp"
#include "qsim/types.hpp"

namespace qsim {

// Hermitian PSD matrix of dimension 2^n. Trace may be below 1: truncation
// produces sub-normalized states whose lost trace is itself an observable.
struct DensityMatrix {
    int n = 0;
    Eigen::MatrixXcd m;

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(int n);

    std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }
    double trace_real() const { return m.trace().real(); }
};

// U rho U† with the gate embedded on `targets` (gate need not be unitary,
// in which case the result is E rho E†).
DensityMatrix apply_gate_density(const DensityMatrix& rho, const GateMatrix& gate,
                                 std::span<const int> targets);
DensityMatrix apply_gate_density(const DensityMatrix& rho, const GateMatrix& gate,
                                 std::initializer_list<int> targets);

// <psi|rho|psi>. Real up to rounding; the tiny imaginary residue is dropped
// after an internal sanity bound.
double pure_vs_mixed_fidelity(const PureState& psi, const DensityMatrix& rho);

double hermiticity_residual(const DensityMatrix& rho);

}  // namespace qsim
