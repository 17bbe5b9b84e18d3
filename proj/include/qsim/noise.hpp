// Noise machinery: Monte Carlo noisy-gate samplers, their exact Kraus
// equivalents, the orthogonalized variant of the phase-noise pair, and the
// Choi-state / superoperator constructions used to check that the different
// representations describe the same channel.
//
// Conventions fixed here and used everywhere:
//  - A noisy gate composes as U_ideal * V_noise (noise acts first in operator
//    order); channels compose the same way: noise channel, then the ideal
//    unitary conjugation.
//  - Vectorization is column-major; the superoperator of a Kraus set is
//    S = sum_i conj(E_i) (x) E_i.
//  - Choi states are normalized to unit trace (prefactor 1/d).
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qsim/density.hpp"
#include "qsim/gates.hpp"
#include "qsim/rng.hpp"
#include "qsim/types.hpp"

namespace qsim {

// Ordered Kraus operators of one channel, dominant completeness weight
// first. Constructors below guarantee sum_i E_i†E_i = I.
struct KrausSet {
    int arity = 1;
    std::vector<GateMatrix> ops;
};

struct NoiseParams {
    double e = 0.0;      // error rate, >= 0
    double theta = 0.0;  // controlled-phase angle (radians)
};

// --- Monte Carlo samplers -------------------------------------------------

// U_ideal * planar_rotation(e*xi) for a pinned noise draw xi.
GateMatrix noisy_single_qubit(const GateMatrix& ideal, double e, double xi);
GateMatrix sample_noisy_single_qubit(const GateMatrix& ideal, const NoiseParams& params,
                                     GaussianStream& rng);

// diag(1, 1, 1, e^{-i(theta + e*xi)}).
GateMatrix noisy_cphase(double theta, double e, double xi);
GateMatrix sample_noisy_cphase(const NoiseParams& params, GaussianStream& rng);

// --- Kraus constructors ---------------------------------------------------

// Dominant weight of the single-qubit rotation-noise channel,
// lambda1 = (1 + exp(-2 e^2)) / 2, and its complement.
double rotation_noise_weight1(double e);
double rotation_noise_weight2(double e);

// P = exp(-e^2): survival probability of the |11> phase coherence.
double phase_noise_p(double e);

// Mixing coefficient that makes the diagonals of the two phase-noise Kraus
// operators orthogonal. Evaluated in the cancellation-free equivalent form
// f = sqrt(P(1-P)) / (1 + P + sqrt(1+3P)); f(0) = 0 by continuity.
double phase_noise_f(double e);

// {sqrt(lambda1) I, sqrt(lambda2) [[0,1],[-1,0]]}
KrausSet hadamard_noise_kraus(double e);

// {diag(1,1,1,sqrt(P)), diag(0,0,0,sqrt(1-P))}. Noise factor only: the
// ideal phase diag(1,1,1,e^{-i theta}) commutes with it and is composed
// separately.
KrausSet cphase_noise_kraus(double e);

struct OrthogonalizedKraus {
    KrausSet set;
    double f = 0.0;
};

// Unitary remix of cphase_noise_kraus whose two diagonals, viewed as
// 4-vectors, are orthogonal. Same channel, different decomposition; the
// dominant-branch evolution differs, which is the point.
OrthogonalizedKraus orthogonalized_cphase_kraus(double e);

// Max-entry residual of sum_i E_i†E_i - I.
double completeness_residual(const KrausSet& k);

// --- Channel application and representations --------------------------------

// sum_i E_i rho E_i† with each operator embedded on `targets`.
DensityMatrix kraus_channel_apply(const DensityMatrix& rho, const KrausSet& k,
                                  std::span<const int> targets);
DensityMatrix kraus_channel_apply(const DensityMatrix& rho, const KrausSet& k,
                                  std::initializer_list<int> targets);

// Unit-trace density matrix of dimension d^2 representing the channel:
// (1/d) sum_{i,j} |i><j| (x) E(|i><j|). First tensor factor is the
// reference subsystem (high bits of the composite index).
struct ChoiMatrix {
    int d = 0;
    Eigen::MatrixXcd m;
};

ChoiMatrix choi_state(const KrausSet& k);

// S = sum_i conj(E_i) (x) E_i acting on column-major vec(rho).
Eigen::MatrixXcd kraus_superoperator(const KrausSet& k);

// Empirical mean of conj(V) (x) V over `trials` sampled unitaries.
// Deterministic for a fixed seed and independent of `workers`.
using GateSampler = std::function<GateMatrix(GaussianStream&)>;
Eigen::MatrixXcd mc_channel_estimate(const GateSampler& sampler, long trials,
                                     std::uint64_t seed, int workers = 1);

}  // namespace qsim
