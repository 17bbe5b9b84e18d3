#include "qsim/density.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    DensityMatrix rho;
    rho.n = psi.n;
    Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(),
                                         static_cast<Eigen::Index>(psi.amps.size()));
    rho.m = v * v.adjoint();
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    DensityMatrix rho;
    rho.n = n;
    const Eigen::Index d = Eigen::Index{1} << n;
    rho.m = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
    return rho;
}

DensityMatrix apply_gate_density(const DensityMatrix& rho, const GateMatrix& gate,
                                 std::span<const int> targets) {
    DensityMatrix out = rho;
    const int n = rho.n;
    const std::size_t d = rho.dim();
    // E rho first (embedded operator on each column), then (E rho) E† via
    // the adjoint identity A E† = (E A†)†.
    for (std::size_t c = 0; c < d; ++c) {
        apply_gate_span(std::span<cplx>(reinterpret_cast<cplx*>(out.m.col(c).data()), d), gate,
                        targets, n);
    }
    out.m = out.m.adjoint().eval();
    for (std::size_t c = 0; c < d; ++c) {
        apply_gate_span(std::span<cplx>(reinterpret_cast<cplx*>(out.m.col(c).data()), d), gate,
                        targets, n);
    }
    out.m = out.m.adjoint().eval();
    return out;
}

DensityMatrix apply_gate_density(const DensityMatrix& rho, const GateMatrix& gate,
                                 std::initializer_list<int> targets) {
    return apply_gate_density(rho, gate, std::span<const int>(targets.begin(), targets.size()));
}

double pure_vs_mixed_fidelity(const PureState& psi, const DensityMatrix& rho) {
    if (psi.n != rho.n) throw std::invalid_argument("state/density dimension mismatch");
    Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(),
                                         static_cast<Eigen::Index>(psi.amps.size()));
    const cplx val = (v.adjoint() * rho.m * v)(0, 0);
    if (std::abs(val.imag()) > 1e-9)
        throw std::runtime_error("non-Hermitian density in fidelity computation");
    return val.real();
}

double hermiticity_residual(const DensityMatrix& rho) {
    return (rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace qsim
