#include "qsim/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

GateMatrix identity_gate(int arity) {
    if (arity != 1 && arity != 2) throw std::invalid_argument("gate arity must be 1 or 2");
    GateMatrix g;
    g.arity = arity;
    for (int i = 0; i < g.dim(); ++i) g.at(i, i) = cplx{1.0, 0.0};
    return g;
}

GateMatrix hadamard_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    GateMatrix g;
    g.arity = 1;
    g.at(0, 0) = s;
    g.at(0, 1) = s;
    g.at(1, 0) = s;
    g.at(1, 1) = -s;
    return g;
}

GateMatrix cphase_gate(double theta) {
    GateMatrix g = identity_gate(2);
    g.at(3, 3) = std::exp(cplx{0.0, -theta});
    return g;
}

GateMatrix planar_rotation(double angle) {
    GateMatrix g;
    g.arity = 1;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    g.at(0, 0) = c;
    g.at(0, 1) = s;
    g.at(1, 0) = -s;
    g.at(1, 1) = c;
    return g;
}

GateMatrix gate_product(const GateMatrix& a, const GateMatrix& b) {
    if (a.arity != b.arity) throw std::invalid_argument("gate arity mismatch in product");
    GateMatrix c;
    c.arity = a.arity;
    c.unitary = a.unitary && b.unitary;
    const int d = a.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < d; ++k) acc += a.at(i, k) * b.at(k, j);
            c.at(i, j) = acc;
        }
    return c;
}

GateMatrix gate_adjoint(const GateMatrix& g) {
    GateMatrix h;
    h.arity = g.arity;
    h.unitary = g.unitary;
    const int d = g.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h.at(i, j) = std::conj(g.at(j, i));
    return h;
}

double unitarity_residual(const GateMatrix& g) {
    const int d = g.dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < d; ++k) acc += std::conj(g.at(k, i)) * g.at(k, j);
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

bool is_unitary(const GateMatrix& g, double tol) { return unitarity_residual(g) <= tol; }

namespace {

void apply_1q(std::span<cplx> amps, const GateMatrix& g, int target) {
    const std::size_t step = std::size_t{1} << target;
    const std::size_t block = step << 1;
    const cplx m00 = g.at(0, 0), m01 = g.at(0, 1), m10 = g.at(1, 0), m11 = g.at(1, 1);
    for (std::size_t base = 0; base < amps.size(); base += block) {
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const cplx a = amps[i0];
            const cplx b = amps[i1];
            amps[i0] = m00 * a + m01 * b;
            amps[i1] = m10 * a + m11 * b;
        }
    }
}

void apply_2q(std::span<cplx> amps, const GateMatrix& g, int t0, int t1) {
    const int lo = std::min(t0, t1);
    const int hi = std::max(t0, t1);
    const std::size_t quarter = amps.size() >> 2;
    const std::size_t bit0 = std::size_t{1} << t0;
    const std::size_t bit1 = std::size_t{1} << t1;
    const std::size_t mask_lo = (std::size_t{1} << lo) - 1;
    const std::size_t mask_hi = (std::size_t{1} << hi) - 1;
    for (std::size_t k = 0; k < quarter; ++k) {
        // spread k over the non-target bit positions
        std::size_t i = ((k & ~mask_lo) << 1) | (k & mask_lo);
        i = ((i & ~mask_hi) << 1) | (i & mask_hi);
        const std::size_t idx[4] = {i, i | bit0, i | bit1, i | bit0 | bit1};
        cplx v[4];
        for (int a = 0; a < 4; ++a) v[a] = amps[idx[a]];
        for (int r = 0; r < 4; ++r) {
            amps[idx[r]] =
                g.at(r, 0) * v[0] + g.at(r, 1) * v[1] + g.at(r, 2) * v[2] + g.at(r, 3) * v[3];
        }
    }
}

}  // namespace

void apply_gate_span(std::span<cplx> amps, const GateMatrix& gate,
                     std::span<const int> targets, int n) {
    if (static_cast<int>(targets.size()) != gate.arity)
        throw std::invalid_argument("target count does not match gate arity");
    for (int t : targets) {
        if (t < 0 || t >= n) throw std::out_of_range("target qubit out of range");
    }
    if (gate.arity == 1) {
        apply_1q(amps, gate, targets[0]);
    } else {
        if (targets[0] == targets[1]) throw std::invalid_argument("duplicate target qubit");
        apply_2q(amps, gate, targets[0], targets[1]);
    }
}

}  // namespace qsim
