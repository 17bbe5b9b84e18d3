#include "qsim/circuits.hpp"

#include <cmath>
#include <stdexcept>

#include "qsim/types.hpp"

namespace qsim {

Circuit build_grover(const GroverSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("qubit count must be >= 1");
    if (spec.iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
    if (spec.marked >= (std::uint64_t{1} << spec.n))
        throw std::out_of_range("marked basis state out of range");
    Circuit c;
    c.n = spec.n;
    auto hadamard_layer = [&c]() {
        for (int q = 0; q < c.n; ++q)
            c.steps.push_back({StepKind::Hadamard, {q, -1}, 0.0, true, 0});
    };
    hadamard_layer();
    for (int it = 0; it < spec.iterations; ++it) {
        c.steps.push_back({StepKind::OraclePhaseFlip, {-1, -1}, 0.0, false, spec.marked});
        hadamard_layer();
        c.steps.push_back({StepKind::ZeroPhaseFlip, {-1, -1}, 0.0, false, 0});
        hadamard_layer();
    }
    return c;
}

Circuit build_qft(const QftSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("qubit count must be >= 1");
    Circuit c;
    c.n = spec.n;
    for (int q = spec.n - 1; q >= 0; --q) {
        c.steps.push_back({StepKind::Hadamard, {q, -1}, 0.0, true, 0});
        for (int k = 1; k <= q; ++k) {
            const double theta = kPi / static_cast<double>(std::uint64_t{1} << k);
            c.steps.push_back({StepKind::CPhase, {q - k, q}, theta, true, 0});
        }
    }
    return c;
}

int count_noisy_steps(const Circuit& c) {
    int count = 0;
    for (const CircuitStep& s : c.steps) count += s.noisy ? 1 : 0;
    return count;
}

int grover_optimal_iterations(int n) {
    const double theta = std::asin(std::pow(2.0, -n / 2.0));
    return static_cast<int>(std::lround(kPi / (4.0 * theta) - 0.5));
}

double ideal_grover_success(int n, int j) {
    if (n < 1 || j < 0) throw std::invalid_argument("invalid Grover parameters");
    const double theta = std::asin(std::pow(2.0, -n / 2.0));
    const double s = std::sin((2.0 * j + 1.0) * theta);
    return s * s;
}

PureState ideal_qft_reference(const PureState& psi) {
    const int n = psi.n;
    const std::size_t dim = psi.dim();
    PureState out;
    out.n = n;
    out.amps.assign(dim, cplx{0.0, 0.0});
    const double scale = std::pow(2.0, -n / 2.0);
    auto bitrev = [n](std::size_t v) {
        std::size_t r = 0;
        for (int b = 0; b < n; ++b) r |= ((v >> b) & 1u) << (n - 1 - b);
        return r;
    };
    for (std::size_t k = 0; k < dim; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t x = 0; x < dim; ++x) {
            const double phase =
                -2.0 * kPi * static_cast<double>((k * x) % dim) / static_cast<double>(dim);
            acc += psi.amps[x] * std::exp(cplx{0.0, phase});
        }
        out.amps[bitrev(k)] = scale * acc;
    }
    return out;
}

PureState apply_ideal_step(const PureState& psi, const CircuitStep& step, int embed_n) {
    if (embed_n < 0) embed_n = psi.n;
    switch (step.kind) {
        case StepKind::Hadamard:
            return apply_gate(psi, hadamard_gate(), {step.targets[0]});
        case StepKind::CPhase:
            return apply_gate(psi, cphase_gate(step.theta), {step.targets[0], step.targets[1]});
        case StepKind::OraclePhaseFlip: {
            PureState out = psi;
            const std::size_t period = std::size_t{1} << embed_n;
            if (step.marked >= period) throw std::out_of_range("marked index out of range");
            for (std::size_t base = 0; base < out.dim(); base += period)
                out.amps[base + step.marked] = -out.amps[base + step.marked];
            return out;
        }
        case StepKind::ZeroPhaseFlip: {
            PureState out = psi;
            const std::size_t period = std::size_t{1} << embed_n;
            for (std::size_t base = 0; base < out.dim(); base += period)
                out.amps[base] = -out.amps[base];
            return out;
        }
    }
    throw std::logic_error("unknown step kind");
}

PureState run_ideal(const Circuit& c, const PureState& input) {
    PureState psi = input;
    for (const CircuitStep& s : c.steps) psi = apply_ideal_step(psi, s, c.n);
    return psi;
}

std::vector<int> grover_checkpoints(const GroverSpec& spec) {
    std::vector<int> cp;
    cp.reserve(static_cast<std::size_t>(spec.iterations) + 1);
    int idx = spec.n - 1;  // end of the initial layer
    cp.push_back(idx);
    const int per_iter = 2 * spec.n + 2;
    for (int it = 0; it < spec.iterations; ++it) {
        idx += per_iter;
        cp.push_back(idx);
    }
    return cp;
}

std::vector<int> qft_checkpoints(const QftSpec& spec) {
    const int total = spec.n + spec.n * (spec.n - 1) / 2;
    return {total - 1};
}

}  // namespace qsim
