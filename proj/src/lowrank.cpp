#include "qsim/lowrank.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qsim {

namespace {

// Eigenvalues of the candidate Gram matrix below this are round-off of zero;
// dropping them avoids square roots of negative noise.
constexpr double kEigClip = 1e-14;

std::span<cplx> column_span(Eigen::MatrixXcd& m, Eigen::Index c) {
    return std::span<cplx>(reinterpret_cast<cplx*>(m.col(c).data()),
                           static_cast<std::size_t>(m.rows()));
}

}  // namespace

LowRankFactor init_pure(const PureState& psi, int rank_cap) {
    if (rank_cap < 1) throw std::invalid_argument("rank cap must be >= 1");
    LowRankFactor f;
    f.n = psi.n;
    f.rank_cap = rank_cap;
    f.cols = Eigen::MatrixXcd(static_cast<Eigen::Index>(psi.dim()), 1);
    for (std::size_t i = 0; i < psi.dim(); ++i) f.cols(static_cast<Eigen::Index>(i), 0) = psi.amps[i];
    return f;
}

LowRankFactor apply_ideal_gate(const LowRankFactor& f, const GateMatrix& gate,
                               std::span<const int> targets) {
    LowRankFactor out = f;
    for (Eigen::Index c = 0; c < out.cols.cols(); ++c)
        apply_gate_span(column_span(out.cols, c), gate, targets, out.n);
    return out;
}

LowRankFactor apply_ideal_gate(const LowRankFactor& f, const GateMatrix& gate,
                               std::initializer_list<int> targets) {
    return apply_ideal_gate(f, gate, std::span<const int>(targets.begin(), targets.size()));
}

LowRankFactor apply_channel_truncate(const LowRankFactor& f, const KrausSet& k,
                                     std::span<const int> targets) {
    const Eigen::Index dim = f.cols.rows();
    const Eigen::Index ncols = f.cols.cols();
    const Eigen::Index nops = static_cast<Eigen::Index>(k.ops.size());
    const Eigen::Index ncand = nops * ncols;

    // Candidates E_i c_k, op-major so the dominant operator's images come
    // first (deterministic tie order at the rank cutoff).
    Eigen::MatrixXcd cand(dim, ncand);
    for (Eigen::Index i = 0; i < nops; ++i) {
        cand.middleCols(i * ncols, ncols) = f.cols;
        for (Eigen::Index c = 0; c < ncols; ++c)
            apply_gate_span(column_span(cand, i * ncols + c), k.ops[static_cast<std::size_t>(i)],
                            targets, f.n);
    }

    // Spectrum of rho' = cand cand† via the small Gram matrix: for a unit
    // eigenpair (w, v) of cand†cand, cand*v has squared norm w and is the
    // matching eigvector of rho'.
    const Eigen::MatrixXcd gram = cand.adjoint() * cand;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success) throw std::runtime_error("Gram eigendecomposition failed");

    const Eigen::Index keep_max = std::min<Eigen::Index>(f.rank_cap, ncand);
    Eigen::Index keep = 0;
    while (keep < keep_max && es.eigenvalues()(ncand - 1 - keep) > kEigClip) ++keep;
    if (keep == 0) keep = 1;  // retain the top component even if fully decayed

    LowRankFactor out;
    out.n = f.n;
    out.rank_cap = f.rank_cap;
    out.cols = Eigen::MatrixXcd(dim, keep);
    for (Eigen::Index j = 0; j < keep; ++j)
        out.cols.col(j) = cand * es.eigenvectors().col(ncand - 1 - j);
    return out;
}

LowRankFactor apply_channel_truncate(const LowRankFactor& f, const KrausSet& k,
                                     std::initializer_list<int> targets) {
    return apply_channel_truncate(f, k, std::span<const int>(targets.begin(), targets.size()));
}

LowRankFactor apply_branch(const LowRankFactor& f, const KrausSet& k,
                           std::span<const int> targets, int branch_index) {
    if (branch_index < 0 || branch_index >= static_cast<int>(k.ops.size()))
        throw std::out_of_range("branch index out of range");
    LowRankFactor out = f;
    const GateMatrix& op = k.ops[static_cast<std::size_t>(branch_index)];
    for (Eigen::Index c = 0; c < out.cols.cols(); ++c)
        apply_gate_span(column_span(out.cols, c), op, targets, out.n);
    return out;
}

LowRankFactor apply_branch(const LowRankFactor& f, const KrausSet& k,
                           std::initializer_list<int> targets, int branch_index) {
    return apply_branch(f, k, std::span<const int>(targets.begin(), targets.size()),
                        branch_index);
}

double surviving_trace(const LowRankFactor& f) { return f.cols.squaredNorm(); }

double fidelity_vs_pure(const PureState& psi, const LowRankFactor& f) {
    if (psi.n != f.n) throw std::invalid_argument("state/factor dimension mismatch");
    Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(),
                                         static_cast<Eigen::Index>(psi.amps.size()));
    return (f.cols.adjoint() * v).squaredNorm();
}

double basis_probability(const LowRankFactor& f, std::uint64_t index) {
    if (index >= f.dim()) throw std::out_of_range("basis index out of range");
    return f.cols.row(static_cast<Eigen::Index>(index)).squaredNorm();
}

DensityMatrix to_density(const LowRankFactor& f) {
    DensityMatrix rho;
    rho.n = f.n;
    rho.m = f.cols * f.cols.adjoint();
    return rho;
}

void flip_basis_sign(LowRankFactor& f, std::uint64_t index) {
    if (index >= f.dim()) throw std::out_of_range("basis index out of range");
    f.cols.row(static_cast<Eigen::Index>(index)) *= -1.0;
}

}  // namespace qsim
