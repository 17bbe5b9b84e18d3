#include "qsim/noise.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qsim {

GateMatrix noisy_single_qubit(const GateMatrix& ideal, double e, double xi) {
    if (ideal.arity != 1) throw std::invalid_argument("ideal gate must act on one qubit");
    if (!is_unitary(ideal)) throw std::invalid_argument("ideal gate must be unitary");
    if (e == 0.0) return ideal;
    return gate_product(ideal, planar_rotation(e * xi));
}

GateMatrix sample_noisy_single_qubit(const GateMatrix& ideal, const NoiseParams& params,
                                     GaussianStream& rng) {
    return noisy_single_qubit(ideal, params.e, rng.next());
}

GateMatrix noisy_cphase(double theta, double e, double xi) {
    return cphase_gate(theta + e * xi);
}

GateMatrix sample_noisy_cphase(const NoiseParams& params, GaussianStream& rng) {
    return noisy_cphase(params.theta, params.e, rng.next());
}

double rotation_noise_weight1(double e) { return 0.5 * (1.0 + std::exp(-2.0 * e * e)); }

double rotation_noise_weight2(double e) { return 0.5 * (1.0 - std::exp(-2.0 * e * e)); }

double phase_noise_p(double e) { return std::exp(-e * e); }

double phase_noise_f(double e) {
    const double p = phase_noise_p(e);
    const double q = std::sqrt(p * (1.0 - p));
    return q / (1.0 + p + std::sqrt(1.0 + 3.0 * p));
}

KrausSet hadamard_noise_kraus(double e) {
    if (e < 0.0) throw std::invalid_argument("error rate must be >= 0");
    const double w1 = std::sqrt(rotation_noise_weight1(e));
    const double w2 = std::sqrt(rotation_noise_weight2(e));
    GateMatrix e1;
    e1.arity = 1;
    e1.unitary = false;
    e1.at(0, 0) = w1;
    e1.at(1, 1) = w1;
    GateMatrix e2;
    e2.arity = 1;
    e2.unitary = false;
    e2.at(0, 1) = w2;
    e2.at(1, 0) = -w2;
    return KrausSet{1, {e1, e2}};
}

KrausSet cphase_noise_kraus(double e) {
    if (e < 0.0) throw std::invalid_argument("error rate must be >= 0");
    const double p = phase_noise_p(e);
    GateMatrix e1;
    e1.arity = 2;
    e1.unitary = false;
    e1.at(0, 0) = 1.0;
    e1.at(1, 1) = 1.0;
    e1.at(2, 2) = 1.0;
    e1.at(3, 3) = std::sqrt(p);
    GateMatrix e2;
    e2.arity = 2;
    e2.unitary = false;
    e2.at(3, 3) = std::sqrt(1.0 - p);
    return KrausSet{2, {e1, e2}};
}

OrthogonalizedKraus orthogonalized_cphase_kraus(double e) {
    if (e < 0.0) throw std::invalid_argument("error rate must be >= 0");
    const double p = phase_noise_p(e);
    const double f = phase_noise_f(e);
    const double scale = 1.0 / std::sqrt(1.0 + f * f);
    const double sp = std::sqrt(p);
    const double sq = std::sqrt(1.0 - p);
    GateMatrix e1;
    e1.arity = 2;
    e1.unitary = false;
    e1.at(0, 0) = scale;
    e1.at(1, 1) = scale;
    e1.at(2, 2) = scale;
    e1.at(3, 3) = scale * (sp + f * sq);
    GateMatrix e2;
    e2.arity = 2;
    e2.unitary = false;
    e2.at(0, 0) = -f * scale;
    e2.at(1, 1) = -f * scale;
    e2.at(2, 2) = -f * scale;
    e2.at(3, 3) = scale * (-f * sp + sq);
    return OrthogonalizedKraus{KrausSet{2, {e1, e2}}, f};
}

double completeness_residual(const KrausSet& k) {
    if (k.ops.empty()) throw std::invalid_argument("empty Kraus set");
    const int d = k.ops.front().dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (const GateMatrix& op : k.ops) {
                for (int r = 0; r < d; ++r) acc += std::conj(op.at(r, i)) * op.at(r, j);
            }
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

DensityMatrix kraus_channel_apply(const DensityMatrix& rho, const KrausSet& k,
                                  std::span<const int> targets) {
    if (static_cast<int>(targets.size()) != k.arity)
        throw std::invalid_argument("target count does not match channel arity");
    DensityMatrix out;
    out.n = rho.n;
    out.m = Eigen::MatrixXcd::Zero(rho.m.rows(), rho.m.cols());
    for (const GateMatrix& op : k.ops) {
        out.m += apply_gate_density(rho, op, targets).m;
    }
    return out;
}

DensityMatrix kraus_channel_apply(const DensityMatrix& rho, const KrausSet& k,
                                  std::initializer_list<int> targets) {
    return kraus_channel_apply(rho, k, std::span<const int>(targets.begin(), targets.size()));
}

ChoiMatrix choi_state(const KrausSet& k) {
    if (k.ops.empty()) throw std::invalid_argument("empty Kraus set");
    const int d = k.ops.front().dim();
    ChoiMatrix choi;
    choi.d = d;
    choi.m = Eigen::MatrixXcd::Zero(d * d, d * d);
    // (I (x) E_k) sum_i |i>|i> stacks E_k's columns with the reference index
    // in the high bits: w[i*d + m] = E_k(m, i).
    Eigen::VectorXcd w(d * d);
    for (const GateMatrix& op : k.ops) {
        for (int i = 0; i < d; ++i)
            for (int m = 0; m < d; ++m) w(i * d + m) = op.at(m, i);
        choi.m += w * w.adjoint();
    }
    choi.m /= static_cast<double>(d);
    return choi;
}

namespace {

Eigen::MatrixXcd gate_to_eigen(const GateMatrix& g) {
    const int d = g.dim();
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = g.at(i, j);
    return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

Eigen::MatrixXcd kraus_superoperator(const KrausSet& k) {
    if (k.ops.empty()) throw std::invalid_argument("empty Kraus set");
    const int d = k.ops.front().dim();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const GateMatrix& op : k.ops) {
        const Eigen::MatrixXcd e = gate_to_eigen(op);
        s += kron(e.conjugate(), e);
    }
    return s;
}

Eigen::MatrixXcd mc_channel_estimate(const GateSampler& sampler, long trials,
                                     std::uint64_t seed, int workers) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (workers < 1) workers = 1;

    // Probe dimension with a throwaway stream (never reused below).
    GaussianStream probe(derive_stream_seed(seed, ~std::uint64_t{0}));
    const int d = sampler(probe).dim();

    // Fixed batches summed independently, then reduced in batch order, so
    // the result does not depend on the worker count.
    constexpr long kBatch = 4096;
    const long batches = (trials + kBatch - 1) / kBatch;
    std::vector<Eigen::MatrixXcd> partial(
        static_cast<std::size_t>(batches), Eigen::MatrixXcd::Zero(d * d, d * d));

    std::atomic<long> next{0};
    auto work = [&]() {
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= batches) return;
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d * d, d * d);
            const long lo = b * kBatch;
            const long hi = std::min(trials, lo + kBatch);
            for (long t = lo; t < hi; ++t) {
                GaussianStream g = GaussianStream::substream(seed, static_cast<std::uint64_t>(t));
                const Eigen::MatrixXcd v = gate_to_eigen(sampler(g));
                acc += kron(v.conjugate(), v);
            }
            partial[static_cast<std::size_t>(b)] = acc;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const Eigen::MatrixXcd& p : partial) sum += p;
    return sum / static_cast<double>(trials);
}

}  // namespace qsim
