// Closed-form accuracy estimators: the Grover lower bound and the naive and
// refined QFT fidelity bounds, with the scalar factors they are built from.
// Everything evaluates in log space so qubit counts around 10^4 do not
// underflow.
#pragma once

#include <span>
#include <vector>

namespace qsim {

struct EstimateInput {
    int n = 1;
    double e = 0.0;
    int j = 0;  // Grover iteration count; ignored by the QFT estimators
};

// Weights of the single-qubit rotation-noise channel:
// lambda1 = (1 + exp(-2 e^2)) / 2, lambda2 = 1 - lambda1.
double lambda1(double e);
double lambda2(double e);

// P = exp(-e^2) and the orthogonalizing mix f (see noise.hpp).
double phase_survival_p(double e);
double f_parameter(double e);

// lambda1^(n + 2nj) * ideal_grover_success(n, j). A lower bound on the
// noisy success probability.
double grover_fidelity_bound(const EstimateInput& inp);
double grover_fidelity_bound(int n, int j, double e);

// P_H^n * P_R^(n(n-1)/8) with P_H = lambda1, P_R = exp(-e^2). The exponent
// is evaluated as a real power.
double qft_fidelity_naive(int n, double e);

// Refined per-gate phase factor (sqrt(P) + f sqrt(1-P))^2 / (1+f^2)^4.
double qft_refined_phase_factor(double e);

// P_H^n * qft_refined_phase_factor^(n(n-1)/8). Lower bound; always at
// least qft_fidelity_naive.
double qft_fidelity_refined(int n, double e);

// Comparison-only variant with a single power of (1+f^2) in the phase
// factor's denominator. Not used by any bound; exposed so the two
// normalizations can be printed side by side.
double qft_fidelity_refined_alt_denom1(int n, double e);

// Per-gate factor of the dominant orthogonalized branch on the uniform
// two-qubit state: [3 + (sqrt(P) + f sqrt(1-P))^2] / [4 (1+f^2)].
double uniform_state_branch_factor(double e);

// rows = e_list, cols = n_list, entries = qft_fidelity_refined.
std::vector<std::vector<double>> qft_accuracy_table(std::span<const int> n_list,
                                                    std::span<const double> e_list);

}  // namespace qsim
