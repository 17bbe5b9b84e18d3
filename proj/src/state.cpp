#include "qsim/state.hpp"

#include <cmath>
#include <stdexcept>

#include "qsim/rng.hpp"

namespace qsim {

PureState PureState::basis(int n, std::uint64_t index) {
    if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
    PureState s;
    s.n = n;
    s.amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    if (index >= s.amps.size()) throw std::out_of_range("basis index out of range");
    s.amps[index] = cplx{1.0, 0.0};
    return s;
}

double norm2(const PureState& s) {
    double acc = 0.0;
    for (const cplx& a : s.amps) acc += std::norm(a);
    return acc;
}

cplx inner_product(const PureState& a, const PureState& b) {
    if (a.n != b.n) throw std::invalid_argument("state dimension mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.amps.size(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return acc;
}

PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     std::span<const int> targets) {
    PureState out = state;
    apply_gate_span(out.amps, gate, targets, out.n);
    return out;
}

PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     std::initializer_list<int> targets) {
    return apply_gate(state, gate, std::span<const int>(targets.begin(), targets.size()));
}

double overlap_fidelity(const PureState& a, const PureState& b) {
    return std::norm(inner_product(a, b));
}

PureState haar_random_state(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
    GaussianStream g(seed);
    PureState s;
    s.n = n;
    s.amps.resize(std::size_t{1} << n);
    for (cplx& a : s.amps) {
        const double re = g.next();
        const double im = g.next();
        a = cplx{re, im};
    }
    const double inv = 1.0 / std::sqrt(norm2(s));
    for (cplx& a : s.amps) a *= inv;
    return s;
}

}  // namespace qsim
