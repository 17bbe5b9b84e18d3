// Fixed-rank evolution of a density matrix in factored form. This is the
// central engine: rho = C C† is tracked through a circuit as the column
// factor C, truncated back to at most `rank_cap` columns after every noisy
// gate. The discarded eigweight lowers the trace, which measures the
// population that left the tracked evolution path.
#pragma once

#include <Eigen/Dense>

#include "qsim/density.hpp"
#include "qsim/noise.hpp"
#include "qsim/state.hpp"

namespace qsim {

// Column factor of a PSD matrix: rho = cols * cols† (2^n x k, k <= rank_cap).
// Positive semidefiniteness holds by construction; the surviving trace
// sum_k ||c_k||^2 lives in (0, 1].
struct LowRankFactor {
    int n = 0;
    int rank_cap = 1;
    Eigen::MatrixXcd cols;

    int rank() const { return static_cast<int>(cols.cols()); }
    std::size_t dim() const { return static_cast<std::size_t>(cols.rows()); }
};

// Rank-1 factor of |psi><psi|.
LowRankFactor init_pure(const PureState& psi, int rank_cap);

// Unitary on every column; trace and rank unchanged.
LowRankFactor apply_ideal_gate(const LowRankFactor& f, const GateMatrix& gate,
                               std::span<const int> targets);
LowRankFactor apply_ideal_gate(const LowRankFactor& f, const GateMatrix& gate,
                               std::initializer_list<int> targets);

// Full channel application followed by rank truncation: forms the candidate
// columns {E_i c_k}, eigendecomposes their (small) Gram matrix, and rebuilds
// the top-rank_cap eigencomponents. Candidate order is op-major then column;
// eigenvalues are kept in descending order, values below 1e-14 dropped.
LowRankFactor apply_channel_truncate(const LowRankFactor& f, const KrausSet& k,
                                     std::span<const int> targets);
LowRankFactor apply_channel_truncate(const LowRankFactor& f, const KrausSet& k,
                                     std::initializer_list<int> targets);

// Deterministic single-branch mode: every column goes through exactly one
// Kraus operator (default the dominant one). Representation-dependent by
// design — remixed Kraus sets give different surviving traces.
LowRankFactor apply_branch(const LowRankFactor& f, const KrausSet& k,
                           std::span<const int> targets, int branch_index = 0);
LowRankFactor apply_branch(const LowRankFactor& f, const KrausSet& k,
                           std::initializer_list<int> targets, int branch_index = 0);

// sum_k ||c_k||^2. Non-increasing along any run.
double surviving_trace(const LowRankFactor& f);

// <psi| C C† |psi> = sum_k |<psi|c_k>|^2.
double fidelity_vs_pure(const PureState& psi, const LowRankFactor& f);

// Probability mass on one basis state: <idx| C C† |idx>.
double basis_probability(const LowRankFactor& f, std::uint64_t index);

// Dense rho = C C† (test/oracle scale only).
DensityMatrix to_density(const LowRankFactor& f);

// Sign flip of the amplitude row `index` across all columns (diagonal
// unitary; used for the oracle and diffusion phase flips).
void flip_basis_sign(LowRankFactor& f, std::uint64_t index);

}  // namespace qsim
