#include "qsim/mc.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qsim {

namespace {

// One trajectory step: noisy steps consume exactly one normal draw.
void apply_step_sampled(PureState& psi, const CircuitStep& step, double e,
                        GaussianStream& rng) {
    switch (step.kind) {
        case StepKind::Hadamard: {
            const GateMatrix g = step.noisy ? noisy_single_qubit(hadamard_gate(), e, rng.next())
                                            : hadamard_gate();
            apply_gate_span(psi.amps, g, std::span<const int>(step.targets, 1), psi.n);
            return;
        }
        case StepKind::CPhase: {
            const GateMatrix g =
                step.noisy ? noisy_cphase(step.theta, e, rng.next()) : cphase_gate(step.theta);
            apply_gate_span(psi.amps, g, std::span<const int>(step.targets, 2), psi.n);
            return;
        }
        case StepKind::OraclePhaseFlip:
            psi.amps[step.marked] = -psi.amps[step.marked];
            return;
        case StepKind::ZeroPhaseFlip:
            psi.amps[0] = -psi.amps[0];
            return;
    }
    throw std::logic_error("unknown step kind");
}

// Runs `body(t, stream)` for every trajectory index, spread over workers.
// Each index gets its own substream; outputs must be written to per-index
// slots so the reduction below stays order-fixed.
void for_each_trajectory(long trials, std::uint64_t seed, int workers,
                         const std::function<void(long, GaussianStream&)>& body) {
    if (workers < 1) workers = 1;
    constexpr long kBatch = 64;
    const long batches = (trials + kBatch - 1) / kBatch;
    std::atomic<long> next{0};
    auto work = [&]() {
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= batches) return;
            const long lo = b * kBatch;
            const long hi = std::min(trials, lo + kBatch);
            for (long t = lo; t < hi; ++t) {
                GaussianStream g = GaussianStream::substream(seed, static_cast<std::uint64_t>(t));
                body(t, g);
            }
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
}

// Mean and stderr from per-trajectory samples, reduced in index order.
// Welford update: constant samples yield exactly zero variance, which the
// e=0 collapse contract relies on.
TrajectoryStats reduce_stats(const std::vector<double>& samples, std::uint64_t seed) {
    const long trials = static_cast<long>(samples.size());
    double mean = 0.0;
    double m2 = 0.0;
    long count = 0;
    for (double v : samples) {
        ++count;
        const double d1 = v - mean;
        mean += d1 / static_cast<double>(count);
        m2 += d1 * (v - mean);
    }
    const double var = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
    TrajectoryStats st;
    st.mean = mean;
    st.stderr_ = std::sqrt(var / static_cast<double>(trials));
    st.trials = trials;
    st.seed = seed;
    return st;
}

}  // namespace

std::vector<TrajectoryStats> run_grover_mc_per_iteration(const GroverSpec& spec, double e,
                                                         long trials, std::uint64_t seed,
                                                         int workers) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const Circuit circuit = build_grover(spec);
    const std::vector<int> checkpoints = grover_checkpoints(spec);
    const std::size_t ncp = checkpoints.size();

    std::vector<std::vector<double>> samples(ncp, std::vector<double>(static_cast<std::size_t>(trials)));
    for_each_trajectory(trials, seed, workers, [&](long t, GaussianStream& g) {
        PureState psi = PureState::basis(spec.n, 0);
        std::size_t cp = 0;
        for (std::size_t s = 0; s < circuit.steps.size(); ++s) {
            apply_step_sampled(psi, circuit.steps[s], e, g);
            if (cp < ncp && static_cast<int>(s) == checkpoints[cp]) {
                samples[cp][static_cast<std::size_t>(t)] = std::norm(psi.amps[spec.marked]);
                ++cp;
            }
        }
    });

    std::vector<TrajectoryStats> out;
    out.reserve(ncp);
    for (const std::vector<double>& row : samples) out.push_back(reduce_stats(row, seed));
    return out;
}

TrajectoryStats run_grover_mc(const GroverSpec& spec, double e, long trials,
                              std::uint64_t seed, int workers) {
    return run_grover_mc_per_iteration(spec, e, trials, seed, workers).back();
}

TrajectoryStats run_qft_mc(const QftSpec& spec, double e, long trials, int inputs_per_trial,
                           std::uint64_t seed, int workers) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (inputs_per_trial < 1) throw std::invalid_argument("inputs_per_trial must be >= 1");
    const Circuit circuit = build_qft(spec);
    const int noisy = count_noisy_steps(circuit);

    std::vector<double> samples(static_cast<std::size_t>(trials * inputs_per_trial));
    for_each_trajectory(trials, seed, workers, [&](long t, GaussianStream& g) {
        // one noisy circuit instance per trajectory, shared by its inputs
        std::vector<double> draws(static_cast<std::size_t>(noisy));
        for (double& d : draws) d = g.next();
        const std::uint64_t traj_seed = derive_stream_seed(seed, static_cast<std::uint64_t>(t));
        for (int rep = 0; rep < inputs_per_trial; ++rep) {
            PureState input =
                haar_random_state(spec.n, derive_stream_seed(traj_seed, static_cast<std::uint64_t>(rep) + 1));
            PureState ideal = run_ideal(circuit, input);
            PureState psi = input;
            std::size_t xi = 0;
            for (const CircuitStep& s : circuit.steps) {
                if (s.noisy) {
                    if (s.kind == StepKind::Hadamard) {
                        apply_gate_span(psi.amps, noisy_single_qubit(hadamard_gate(), e, draws[xi]),
                                        std::span<const int>(s.targets, 1), psi.n);
                    } else {
                        apply_gate_span(psi.amps, noisy_cphase(s.theta, e, draws[xi]),
                                        std::span<const int>(s.targets, 2), psi.n);
                    }
                    ++xi;
                } else {
                    psi = apply_ideal_step(psi, s);
                }
            }
            samples[static_cast<std::size_t>(t * inputs_per_trial + rep)] =
                overlap_fidelity(ideal, psi);
        }
    });
    return reduce_stats(samples, seed);
}

namespace {

KrausSet phase_noise_set(KrausForm form, double e) {
    return form == KrausForm::Diagonal ? cphase_noise_kraus(e)
                                       : orthogonalized_cphase_kraus(e).set;
}

}  // namespace

std::vector<LowRankRecord> run_lowrank_experiment(const Circuit& circuit, double e,
                                                  const PureState& input,
                                                  std::span<const int> checkpoints,
                                                  const LowRankOptions& opts) {
    if (opts.rank < 1) throw std::invalid_argument("rank must be >= 1");
    const KrausSet hadamard_noise = hadamard_noise_kraus(e);
    const KrausSet phase_noise = phase_noise_set(opts.kraus, e);

    LowRankFactor f = init_pure(input, opts.rank);
    PureState ideal = input;
    // the circuit may act on the low half of a wider (entangled) state, in
    // which case its phase flips repeat across the upper qubits
    const std::size_t flip_period = std::size_t{1} << circuit.n;
    auto flip_embedded = [&](LowRankFactor& fac, std::uint64_t index) {
        for (std::size_t base = 0; base < fac.dim(); base += flip_period)
            flip_basis_sign(fac, base + index);
    };

    std::vector<LowRankRecord> records;
    std::size_t cp = 0;
    int ordinal = 0;
    auto record = [&]() {
        LowRankRecord r;
        r.step = ++ordinal;
        r.fidelity = fidelity_vs_pure(ideal, f);
        r.survived_trace = surviving_trace(f);
        r.marked_prob = opts.has_marked ? basis_probability(f, opts.marked) : 0.0;
        records.push_back(r);
    };

    for (std::size_t s = 0; s < circuit.steps.size(); ++s) {
        const CircuitStep& step = circuit.steps[s];
        switch (step.kind) {
            case StepKind::Hadamard: {
                const std::span<const int> tg(step.targets, 1);
                if (step.noisy && e > 0.0) {
                    f = (opts.mode == LowRankMode::EigenTruncate)
                            ? apply_channel_truncate(f, hadamard_noise, tg)
                            : apply_branch(f, hadamard_noise, tg, 0);
                }
                f = apply_ideal_gate(f, hadamard_gate(), tg);
                break;
            }
            case StepKind::CPhase: {
                const std::span<const int> tg(step.targets, 2);
                if (step.noisy && e > 0.0) {
                    f = (opts.mode == LowRankMode::EigenTruncate)
                            ? apply_channel_truncate(f, phase_noise, tg)
                            : apply_branch(f, phase_noise, tg, 0);
                }
                f = apply_ideal_gate(f, cphase_gate(step.theta), tg);
                break;
            }
            case StepKind::OraclePhaseFlip:
                flip_embedded(f, step.marked);
                break;
            case StepKind::ZeroPhaseFlip:
                flip_embedded(f, 0);
                break;
        }
        ideal = apply_ideal_step(ideal, step, circuit.n);
        if (opts.per_gate) {
            record();
        } else if (cp < checkpoints.size() && static_cast<int>(s) == checkpoints[cp]) {
            record();
            ++cp;
        }
    }
    return records;
}

DensityMatrix run_exact_density(const Circuit& circuit, double e, const PureState& input,
                                KrausForm kraus) {
    const KrausSet hadamard_noise = hadamard_noise_kraus(e);
    const KrausSet phase_noise = phase_noise_set(kraus, e);
    DensityMatrix rho = DensityMatrix::from_pure(input);
    const Eigen::Index flip_period = Eigen::Index{1} << circuit.n;
    for (const CircuitStep& step : circuit.steps) {
        switch (step.kind) {
            case StepKind::Hadamard: {
                const std::span<const int> tg(step.targets, 1);
                if (step.noisy && e > 0.0) rho = kraus_channel_apply(rho, hadamard_noise, tg);
                rho = apply_gate_density(rho, hadamard_gate(), tg);
                break;
            }
            case StepKind::CPhase: {
                const std::span<const int> tg(step.targets, 2);
                if (step.noisy && e > 0.0) rho = kraus_channel_apply(rho, phase_noise, tg);
                rho = apply_gate_density(rho, cphase_gate(step.theta), tg);
                break;
            }
            case StepKind::OraclePhaseFlip: {
                for (Eigen::Index base = 0; base < rho.m.rows(); base += flip_period) {
                    rho.m.row(base + static_cast<Eigen::Index>(step.marked)) *= -1.0;
                    rho.m.col(base + static_cast<Eigen::Index>(step.marked)) *= -1.0;
                }
                break;
            }
            case StepKind::ZeroPhaseFlip:
                for (Eigen::Index base = 0; base < rho.m.rows(); base += flip_period) {
                    rho.m.row(base) *= -1.0;
                    rho.m.col(base) *= -1.0;
                }
                break;
        }
    }
    return rho;
}

}  // namespace qsim
