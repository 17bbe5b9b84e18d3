#include "qsim/estimate.hpp"

#include <cmath>
#include <stdexcept>

#include "qsim/circuits.hpp"
#include "qsim/noise.hpp"

namespace qsim {

double lambda1(double e) { return rotation_noise_weight1(e); }

double lambda2(double e) { return rotation_noise_weight2(e); }

double phase_survival_p(double e) { return phase_noise_p(e); }

double f_parameter(double e) { return phase_noise_f(e); }

double grover_fidelity_bound(const EstimateInput& inp) {
    return grover_fidelity_bound(inp.n, inp.j, inp.e);
}

double grover_fidelity_bound(int n, int j, double e) {
    if (n < 1 || j < 0 || e < 0.0) throw std::invalid_argument("invalid estimate input");
    const double gates = static_cast<double>(n) + 2.0 * n * j;
    return std::exp(gates * std::log(lambda1(e))) * ideal_grover_success(n, j);
}

namespace {

double phase_gate_exponent(int n) {
    // n(n-1)/8 as a real power; half the number of phase gates acts on a
    // quarter of the amplitudes of a random state.
    return static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 8.0;
}

}  // namespace

double qft_fidelity_naive(int n, double e) {
    if (n < 1 || e < 0.0) throw std::invalid_argument("invalid estimate input");
    const double log_f = n * std::log(lambda1(e)) + phase_gate_exponent(n) * (-e * e);
    return std::exp(log_f);
}

double qft_refined_phase_factor(double e) {
    const double p = phase_noise_p(e);
    const double f = phase_noise_f(e);
    const double u = std::sqrt(p) + f * std::sqrt(1.0 - p);
    const double denom = 1.0 + f * f;
    return (u * u) / (denom * denom * denom * denom);
}

double qft_fidelity_refined(int n, double e) {
    if (n < 1 || e < 0.0) throw std::invalid_argument("invalid estimate input");
    const double log_f =
        n * std::log(lambda1(e)) + phase_gate_exponent(n) * std::log(qft_refined_phase_factor(e));
    return std::exp(log_f);
}

double qft_fidelity_refined_alt_denom1(int n, double e) {
    if (n < 1 || e < 0.0) throw std::invalid_argument("invalid estimate input");
    const double p = phase_noise_p(e);
    const double f = phase_noise_f(e);
    const double u = std::sqrt(p) + f * std::sqrt(1.0 - p);
    const double factor = (u * u) / (1.0 + f * f);
    const double log_f = n * std::log(lambda1(e)) + phase_gate_exponent(n) * std::log(factor);
    return std::exp(log_f);
}

double uniform_state_branch_factor(double e) {
    const double p = phase_noise_p(e);
    const double f = phase_noise_f(e);
    const double u = std::sqrt(p) + f * std::sqrt(1.0 - p);
    return (3.0 + u * u) / (4.0 * (1.0 + f * f));
}

std::vector<std::vector<double>> qft_accuracy_table(std::span<const int> n_list,
                                                    std::span<const double> e_list) {
    if (n_list.empty() || e_list.empty()) throw std::invalid_argument("empty table axis");
    std::vector<std::vector<double>> table;
    table.reserve(e_list.size());
    for (double e : e_list) {
        std::vector<double> row;
        row.reserve(n_list.size());
        for (int n : n_list) row.push_back(qft_fidelity_refined(n, e));
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace qsim
