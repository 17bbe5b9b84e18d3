// Monte Carlo trajectory simulation of noisy circuits and the driver that
// runs the low-rank engine over a circuit while recording per-checkpoint
// observables.
//
// Determinism contract: trajectory t of a run with seed s uses the RNG
// substream (s, t) and nothing else; per-trajectory observables are stored
// by index and reduced in index order after all workers join, so results
// are bit-identical for any worker count.
#pragma once

#include <cstdint>
#include <vector>

#include "qsim/circuits.hpp"
#include "qsim/lowrank.hpp"
#include "qsim/noise.hpp"

namespace qsim {

struct TrajectoryStats {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample standard deviation / sqrt(trials)
    long trials = 0;
    std::uint64_t seed = 0;
};

// Marked-state probability of the noisy Grover run, fresh noise draw per
// noisy gate per trajectory. Index i of the result is the statistic after i
// iterations (index 0 = right after the initial Hadamard layer).
std::vector<TrajectoryStats> run_grover_mc_per_iteration(const GroverSpec& spec, double e,
                                                         long trials, std::uint64_t seed,
                                                         int workers = 1);

// Final-iteration statistic only.
TrajectoryStats run_grover_mc(const GroverSpec& spec, double e, long trials,
                              std::uint64_t seed, int workers = 1);

// Mean fidelity |<QFT_ideal psi | psi_noisy>|^2 over jointly sampled noise
// and Haar inputs. Each trajectory draws one noisy circuit instance and
// applies it to `inputs_per_trial` fresh Haar inputs.
TrajectoryStats run_qft_mc(const QftSpec& spec, double e, long trials,
                           int inputs_per_trial, std::uint64_t seed, int workers = 1);

// Which Kraus decomposition backs the controlled-phase noise. The plain
// diagonal pair and its orthogonalized remix describe the same channel, so
// eigen-mode results agree; branch mode is decomposition-dependent.
enum class KrausForm { Diagonal, Orthogonalized };

enum class LowRankMode { EigenTruncate, Branch };

struct LowRankOptions {
    KrausForm kraus = KrausForm::Diagonal;
    LowRankMode mode = LowRankMode::EigenTruncate;
    int rank = 1;
    bool per_gate = false;              // record after every step instead
    bool has_marked = false;            // also record one basis probability
    std::uint64_t marked = 0;
};

struct LowRankRecord {
    int step = 0;        // 1-based checkpoint ordinal
    double fidelity = 0.0;       // vs the ideal state at the same point
    double survived_trace = 0.0;
    double marked_prob = 0.0;    // 0 unless has_marked
};

// Runs the low-rank engine over `circuit` with per-gate noise strength `e`,
// recording at `checkpoints` (step indices; ignored when per_gate is set).
std::vector<LowRankRecord> run_lowrank_experiment(const Circuit& circuit, double e,
                                                  const PureState& input,
                                                  std::span<const int> checkpoints,
                                                  const LowRankOptions& opts);

// Exact dense-density evolution of the same noisy circuit (oracle scale).
DensityMatrix run_exact_density(const Circuit& circuit, double e, const PureState& input,
                                KrausForm kraus = KrausForm::Diagonal);

}  // namespace qsim
