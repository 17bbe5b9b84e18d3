// Circuit builders for Grover search and the quantum Fourier transform, with
// per-gate noise annotations, plus exact ideal references for both.
#pragma once

#include <cstdint>
#include <vector>

#include "qsim/state.hpp"

namespace qsim {

enum class StepKind {
    Hadamard,        // single qubit, may be noisy
    CPhase,          // two qubits, diag(1,1,1,e^{-i theta}), may be noisy
    OraclePhaseFlip, // sign flip on one marked basis state, always ideal
    ZeroPhaseFlip,   // sign flip on |0...0>, always ideal
};

struct CircuitStep {
    StepKind kind = StepKind::Hadamard;
    int targets[2] = {-1, -1};
    double theta = 0.0;
    bool noisy = false;
    std::uint64_t marked = 0;  // OraclePhaseFlip only
};

struct Circuit {
    int n = 0;
    std::vector<CircuitStep> steps;
};

struct GroverSpec {
    int n = 1;
    std::uint64_t marked = 0;
    int iterations = 0;
};

struct QftSpec {
    int n = 1;
};

// n initial Hadamards (noisy); per iteration: oracle flip (ideal), n
// Hadamards (noisy), zero flip (ideal), n Hadamards (noisy). Noisy-gate
// count is exactly n + 2nj.
Circuit build_grover(const GroverSpec& spec);

// Standard no-swap QFT network: qubits from most significant to least, one
// noisy Hadamard each, then noisy cphase(pi/2^k) to each qubit k positions
// below. n Hadamards and n(n-1)/2 phase gates total.
Circuit build_qft(const QftSpec& spec);

int count_noisy_steps(const Circuit& c);

// Iteration count maximizing the success probability.
int grover_optimal_iterations(int n);

// sin^2((2j+1) asin(2^{-n/2})): marked-state probability of the ideal
// algorithm after j iterations.
double ideal_grover_success(int n, int j);

// Exact reference for build_qft at e=0: out[bitrev(k)] =
// 2^{-n/2} sum_x e^{-2 pi i k x / 2^n} psi_x. Computed as the direct
// O(4^n) sum so it stays independent of the gate kernels.
PureState ideal_qft_reference(const PureState& psi);

// One ideal step on a pure state (noise flags ignored). `embed_n` is the
// circuit's own qubit span; when the state is wider (a run on half of an
// entangled pair), the phase flips repeat across the upper qubits, i.e.
// they act as I (x) D. Defaults to the state width.
PureState apply_ideal_step(const PureState& psi, const CircuitStep& step, int embed_n = -1);

// Whole circuit at e=0 (embeds on the low c.n qubits of the input).
PureState run_ideal(const Circuit& c, const PureState& input);

// Step indices after which per-iteration observables are recorded: for
// Grover, the end of the initial layer and of each iteration; for QFT, the
// final step only.
std::vector<int> grover_checkpoints(const GroverSpec& spec);
std::vector<int> qft_checkpoints(const QftSpec& spec);

}  // namespace qsim
