// qnoise: experiment driver for the noisy-circuit simulator. Subcommands
// reproduce the figure datasets as CSV (fig1/fig2/fig3), run one-off
// estimates and simulations (estimate, grover-sim, qft-sim), and validate
// the channel-representation equivalences (channel-check).
//
// Exit codes: 0 success, 1 invalid arguments, 2 check-threshold breach,
// 3 resource-guard refusal.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qsim/circuits.hpp"
#include "qsim/estimate.hpp"
#include "qsim/lowrank.hpp"
#include "qsim/mc.hpp"
#include "qsim/noise.hpp"
#include "qsim/state.hpp"

namespace {

using namespace qsim;

struct ThresholdBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt10(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmtg(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// CSV sink: buffers rows, then writes either to stdout or to a temp file
// renamed into place, so an interrupted or failed run leaves no partial
// output at the target path.
class CsvOut {
public:
    explicit CsvOut(std::string path) : path_(std::move(path)) {}

    void header(const std::vector<std::string>& cols) { line(cols); }
    void row(const std::vector<std::string>& cols) { line(cols); }

    void commit() {
        if (path_.empty()) {
            std::cout << buf_.str();
            std::cout.flush();
            return;
        }
        const std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open output file: " + tmp);
            out << buf_.str();
        }
        std::filesystem::rename(tmp, path_);
    }

private:
    void line(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) buf_ << ',';
            buf_ << cols[i];
        }
        buf_ << '\n';
    }

    std::string path_;
    std::ostringstream buf_;
};

// Memory the low-rank engine needs at n qubits with rank cap r: candidate
// block, Gram temporaries and the rebuilt factor. Refuses before any work.
void guard_lowrank_memory(int n, int max_rank) {
    const double bytes = 16.0 * std::pow(2.0, n) * (6.0 * max_rank + 8.0);
    constexpr double kLimit = 4.0 * 1024.0 * 1024.0 * 1024.0;
    if (bytes > kLimit) {
        std::ostringstream msg;
        msg << "refusing run: rank-" << max_rank << " factor at n=" << n
            << " needs about " << fmtg(bytes / (1024.0 * 1024.0 * 1024.0))
            << " GiB (limit 4 GiB); lower --rank or --n";
        throw ResourceGuard(msg.str());
    }
}

void echo_kv(std::ostream& os, const std::string& key, const std::string& val) {
    os << key << " = " << val << "\n";
}

PureState entangled_input(int n) {
    // sum_i |i>_ref |i>_sys / sqrt(2^n) on 2n qubits; circuit targets act on
    // the low-half system qubits.
    PureState s;
    s.n = 2 * n;
    s.amps.assign(std::size_t{1} << (2 * n), cplx{0.0, 0.0});
    const double a = std::pow(2.0, -n / 2.0);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i)
        s.amps[(i << n) | i] = a;
    return s;
}

KrausForm parse_kraus(const std::string& s) {
    if (s == "eq4") return KrausForm::Diagonal;
    if (s == "eq7") return KrausForm::Orthogonalized;
    throw std::invalid_argument("invalid parameter: --kraus must be eq4 or eq7");
}

// Config files are flat `key = value` lines with '#' comments. Values fill
// only options that were not given on the command line, so the precedence
// is: flags, then config file, then built-in defaults.
class ConfigApplier {
public:
    ConfigApplier(CLI::App* sub, const std::string& path) : sub_(sub) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("invalid parameter: --config file not readable: " + path);
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (trim(line).empty()) continue;
                throw std::invalid_argument("invalid parameter: malformed config line: " + line);
            }
            kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    template <typename T>
    void opt(const std::string& key, T& field) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return;
        if (sub_->count("--" + key) == 0) parse_into(it->second, field);
        kv_.erase(it);
    }

    void finish() const {
        if (!kv_.empty())
            throw std::invalid_argument("invalid parameter: unknown config key: " +
                                        kv_.begin()->first);
    }

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static void parse_into(const std::string& v, int& out) { out = std::stoi(v); }
    static void parse_into(const std::string& v, long& out) { out = std::stol(v); }
    static void parse_into(const std::string& v, double& out) { out = std::stod(v); }
    static void parse_into(const std::string& v, std::uint64_t& out) { out = std::stoull(v); }
    static void parse_into(const std::string& v, std::string& out) { out = v; }
    static void parse_into(const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes" || v == "on")
            out = true;
        else if (v == "false" || v == "0" || v == "no" || v == "off")
            out = false;
        else
            throw std::invalid_argument("invalid parameter: non-boolean config value: " + v);
    }
    static void parse_into(const std::string& v, std::vector<double>& out) {
        out.clear();
        std::istringstream in(v);
        std::string cell;
        while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
    }

    CLI::App* sub_;
    std::map<std::string, std::string> kv_;
};

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateCfg {
    int n = 1;
    double e = 0.0;
    int j = 0;
    bool qft = false;
    bool grover = false;
    std::string out;
    std::string config_path;
};

int cmd_estimate(const EstimateCfg& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("invalid parameter: --n must be >= 1");
    if (cfg.e < 0.0) throw std::invalid_argument("invalid parameter: --e must be >= 0");
    if (cfg.j < 0) throw std::invalid_argument("invalid parameter: --j must be >= 0");

    std::cerr << "# effective config\n";
    echo_kv(std::cerr, "n", std::to_string(cfg.n));
    echo_kv(std::cerr, "e", fmtg(cfg.e));
    echo_kv(std::cerr, "j", std::to_string(cfg.j));

    std::ostringstream body;
    echo_kv(body, "lambda1", fmt10(lambda1(cfg.e)));
    echo_kv(body, "lambda2", fmt10(lambda2(cfg.e)));
    echo_kv(body, "f", fmt10(f_parameter(cfg.e)));
    echo_kv(body, "P", fmt10(phase_survival_p(cfg.e)));
    echo_kv(body, "P_H", fmt10(lambda1(cfg.e)));
    echo_kv(body, "P_R", fmt10(phase_survival_p(cfg.e)));
    echo_kv(body, "P_R_refined", fmt10(qft_refined_phase_factor(cfg.e)));
    if (cfg.grover) {
        echo_kv(body, "grover_ideal", fmt10(ideal_grover_success(cfg.n, cfg.j)));
        echo_kv(body, "grover_bound", fmt10(grover_fidelity_bound(cfg.n, cfg.j, cfg.e)));
    }
    if (cfg.qft) {
        echo_kv(body, "qft_naive", fmt10(qft_fidelity_naive(cfg.n, cfg.e)));
        echo_kv(body, "qft_refined", fmt10(qft_fidelity_refined(cfg.n, cfg.e)));
        // comparison-only alternative normalization, not a bound used anywhere
        echo_kv(body, "qft_refined_alt_denom1", fmt10(qft_fidelity_refined_alt_denom1(cfg.n, cfg.e)));
    }

    if (cfg.out.empty()) {
        std::cout << body.str();
    } else {
        const std::string tmp = cfg.out + ".tmp";
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open output file: " + tmp);
        f << body.str();
        f.close();
        std::filesystem::rename(tmp, cfg.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// fig1: per-iteration fidelity of the low-rank Grover run at two ranks
// ---------------------------------------------------------------------------

struct Fig1Cfg {
    int n = 12;
    double e = 0.01;
    int rank1 = 1;
    int rank2 = 30;
    int j = 0;  // 0 = optimal count
    std::uint64_t marked = ~std::uint64_t{0};
    std::string kraus = "eq4";
    bool per_gate = false;
    bool choi_space = false;
    std::string out;
    std::string config_path;
};

int cmd_fig1(const Fig1Cfg& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("invalid parameter: --n must be >= 1");
    if (cfg.e < 0.0) throw std::invalid_argument("invalid parameter: --e must be >= 0");
    if (cfg.rank1 < 1 || cfg.rank2 < 1)
        throw std::invalid_argument("invalid parameter: ranks must be >= 1");
    const int max_rank = std::max(cfg.rank1, cfg.rank2);
    if (cfg.n > 14 && max_rank >= 30)
        throw ResourceGuard("refusing n > 14 at rank >= 30: the factor would not fit in memory");
    const int n_eff = cfg.choi_space ? 2 * cfg.n : cfg.n;
    guard_lowrank_memory(n_eff, max_rank);

    GroverSpec spec;
    spec.n = cfg.n;
    spec.marked = cfg.marked == ~std::uint64_t{0} ? (std::uint64_t{1} << cfg.n) - 1 : cfg.marked;
    spec.iterations = cfg.j > 0 ? cfg.j : grover_optimal_iterations(cfg.n);

    std::cerr << "# effective config\n";
    echo_kv(std::cerr, "n", std::to_string(cfg.n));
    echo_kv(std::cerr, "e", fmtg(cfg.e));
    echo_kv(std::cerr, "rank1", std::to_string(cfg.rank1));
    echo_kv(std::cerr, "rank2", std::to_string(cfg.rank2));
    echo_kv(std::cerr, "j", std::to_string(spec.iterations));
    echo_kv(std::cerr, "marked", std::to_string(spec.marked));
    echo_kv(std::cerr, "kraus", cfg.kraus);
    echo_kv(std::cerr, "space", cfg.choi_space ? "choi" : "state");

    const Circuit circ = build_grover(spec);
    const std::vector<int> cps = grover_checkpoints(spec);
    const PureState input =
        cfg.choi_space ? entangled_input(cfg.n) : PureState::basis(cfg.n, 0);

    LowRankOptions opts;
    opts.kraus = parse_kraus(cfg.kraus);
    opts.mode = LowRankMode::EigenTruncate;
    opts.per_gate = cfg.per_gate;
    opts.rank = cfg.rank1;
    const std::vector<LowRankRecord> a = run_lowrank_experiment(circ, cfg.e, input, cps, opts);
    opts.rank = cfg.rank2;
    const std::vector<LowRankRecord> b = run_lowrank_experiment(circ, cfg.e, input, cps, opts);

    CsvOut csv(cfg.out);
    csv.header({"step", "fid_rank1", "fid_rank30", "abs_gap"});
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double gap = std::abs(a[i].fidelity - b[i].fidelity);
        csv.row({std::to_string(a[i].step), fmt10(a[i].fidelity), fmt10(b[i].fidelity),
                 fmt10(gap)});
    }
    csv.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// fig2: QFT Monte Carlo sweep against the two closed-form bounds
// ---------------------------------------------------------------------------

struct Fig2Cfg {
    double e = 0.01;
    int nmin = 2;
    int nmax = 10;
    long trials = 2000;
    int inputs_per_trial = 1;
    std::uint64_t seed = 12345;
    int workers = 1;
    std::string out;
    std::string config_path;
};

int cmd_fig2(const Fig2Cfg& cfg) {
    if (cfg.e < 0.0) throw std::invalid_argument("invalid parameter: --e must be >= 0");
    if (cfg.nmin < 1 || cfg.nmax < cfg.nmin)
        throw std::invalid_argument("invalid parameter: need 1 <= --nmin <= --nmax");
    if (cfg.trials < 1) throw std::invalid_argument("invalid parameter: --trials must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("invalid parameter: --workers must be >= 1");
    if (cfg.nmax > 16) throw ResourceGuard("refusing Monte Carlo sweep beyond n = 16");

    std::cerr << "# effective config\n";
    echo_kv(std::cerr, "e", fmtg(cfg.e));
    echo_kv(std::cerr, "nmin", std::to_string(cfg.nmin));
    echo_kv(std::cerr, "nmax", std::to_string(cfg.nmax));
    echo_kv(std::cerr, "trials", std::to_string(cfg.trials));
    echo_kv(std::cerr, "inputs_per_trial", std::to_string(cfg.inputs_per_trial));
    echo_kv(std::cerr, "seed", std::to_string(cfg.seed));
    echo_kv(std::cerr, "workers", std::to_string(cfg.workers));

    CsvOut csv(cfg.out);
    csv.header({"n", "mc_mean", "mc_stderr", "naive_eq6", "refined_eq8"});
    for (int n = cfg.nmin; n <= cfg.nmax; ++n) {
        const TrajectoryStats st =
            run_qft_mc(QftSpec{n}, cfg.e, cfg.trials, cfg.inputs_per_trial, cfg.seed, cfg.workers);
        csv.row({std::to_string(n), fmt10(st.mean), fmt10(st.stderr_),
                 fmt10(qft_fidelity_naive(n, cfg.e)), fmt10(qft_fidelity_refined(n, cfg.e))});
    }
    csv.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// fig3: refined-estimate accuracy table over a log-spaced qubit grid
// ---------------------------------------------------------------------------

struct Fig3Cfg {
    std::vector<double> e_list{0.0001, 0.001, 0.01};
    int nmax = 10000;
    std::string out;
    std::string config_path;
};

std::vector<int> log_spaced_grid(int nmax) {
    // 1-1.25-1.6-2-2.5-3.2-4-5-6.3-8 per decade, so round qubit counts like
    // 1000 and 2000 appear exactly.
    static const double mult[] = {1.0, 1.25, 1.6, 2.0, 2.5, 3.2, 4.0, 5.0, 6.3, 8.0};
    std::vector<int> grid;
    for (double decade = 1.0; decade <= nmax; decade *= 10.0) {
        for (double m : mult) {
            const int v = static_cast<int>(std::lround(m * decade));
            if (v <= nmax && (grid.empty() || v > grid.back())) grid.push_back(v);
        }
    }
    if (grid.back() != nmax) grid.push_back(nmax);
    return grid;
}

int cmd_fig3(const Fig3Cfg& cfg) {
    if (cfg.e_list.empty()) throw std::invalid_argument("invalid parameter: --e-list is empty");
    for (double e : cfg.e_list)
        if (e < 0.0) throw std::invalid_argument("invalid parameter: --e-list entries must be >= 0");
    if (cfg.nmax < 1) throw std::invalid_argument("invalid parameter: --nmax must be >= 1");

    std::cerr << "# effective config\n";
    {
        std::ostringstream es;
        for (std::size_t i = 0; i < cfg.e_list.size(); ++i)
            es << (i ? "," : "") << fmtg(cfg.e_list[i]);
        echo_kv(std::cerr, "e_list", es.str());
    }
    echo_kv(std::cerr, "nmax", std::to_string(cfg.nmax));

    const std::vector<int> grid = log_spaced_grid(cfg.nmax);
    CsvOut csv(cfg.out);
    std::vector<std::string> head{"n"};
    for (double e : cfg.e_list) head.push_back("refined_e" + fmtg(e));
    csv.header(head);
    for (int n : grid) {
        std::vector<std::string> row{std::to_string(n)};
        for (double e : cfg.e_list) row.push_back(fmt10(qft_fidelity_refined(n, e)));
        csv.row(row);
    }
    csv.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// channel-check: representation-equivalence report
// ---------------------------------------------------------------------------

struct ChannelCheckCfg {
    std::vector<double> e_grid{0.001, 0.01, 0.1, 1.0};
    long trials = 100000;
    std::uint64_t seed = 12345;
    int workers = 1;
    bool corrupt = false;  // test fixture: break one Kraus set on purpose
    std::string config_path;
};

Eigen::MatrixXcd analytic_rotation_superop(double e) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
    const double l1 = lambda1(e);
    const double l2 = lambda2(e);
    // E[conj(V) (x) V] for V = planar_rotation(e xi): lambda1 I(x)I + lambda2 J(x)J
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd j;
    j << 0.0, 1.0, -1.0, 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    s(a * 2 + c, b * 2 + d) = l1 * id(a, b) * id(c, d) + l2 * j(a, b) * j(c, d);
    return s;
}

Eigen::MatrixXcd analytic_phase_superop(double e) {
    // E[conj(V) (x) V] for V = diag(1,1,1,e^{-i e xi}): diagonal, with
    // coherence factor E[e^{-+i e xi}] = exp(-e^2/2) on the mixed slots.
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(16, 16);
    const double damp = std::exp(-e * e / 2.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool mi = i == 3, mj = j == 3;
            s(i * 4 + j, i * 4 + j) = (mi == mj) ? 1.0 : damp;
        }
    return s;
}

int cmd_channel_check(const ChannelCheckCfg& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("invalid parameter: --trials must be >= 1");
    if (cfg.e_grid.empty()) throw std::invalid_argument("invalid parameter: --e-grid is empty");

    std::cerr << "# effective config\n";
    {
        std::ostringstream es;
        for (std::size_t i = 0; i < cfg.e_grid.size(); ++i)
            es << (i ? "," : "") << fmtg(cfg.e_grid[i]);
        echo_kv(std::cerr, "e_grid", es.str());
    }
    echo_kv(std::cerr, "trials", std::to_string(cfg.trials));
    echo_kv(std::cerr, "seed", std::to_string(cfg.seed));
    echo_kv(std::cerr, "workers", std::to_string(cfg.workers));
    echo_kv(std::cerr, "corrupt", cfg.corrupt ? "true" : "false");

    constexpr double kTolComplete = 1e-10;
    constexpr double kTolChoi = 1e-12;
    constexpr double kTolClosed = 1e-14;
    constexpr double kTolMc = 5e-3;
    constexpr double kTolOrtho = 1e-12;

    bool ok = true;
    std::string first_failure;
    auto report = [&](const std::string& name, double e, double value, double tol) {
        const bool pass = value <= tol;
        std::cout << name << " e=" << fmtg(e) << " residual=" << fmt10(value)
                  << " tol=" << fmtg(tol) << (pass ? " ok" : " BREACH") << "\n";
        if (!pass && ok) {
            ok = false;
            first_failure = name;
        }
    };

    for (double e : cfg.e_grid) {
        KrausSet rot = hadamard_noise_kraus(e);
        KrausSet diag = cphase_noise_kraus(e);
        OrthogonalizedKraus ortho = orthogonalized_cphase_kraus(e);
        if (cfg.corrupt) rot.ops[0].at(0, 0) += 0.05;

        report("completeness_rotation", e, completeness_residual(rot), kTolComplete);
        report("completeness_phase", e, completeness_residual(diag), kTolComplete);
        report("completeness_orthogonalized", e, completeness_residual(ortho.set), kTolComplete);

        const ChoiMatrix c1 = choi_state(diag);
        const ChoiMatrix c2 = choi_state(ortho.set);
        report("choi_equality", e, (c1.m - c2.m).cwiseAbs().maxCoeff(), kTolChoi);

        report("closedform_rotation", e,
               (kraus_superoperator(rot) - analytic_rotation_superop(e)).cwiseAbs().maxCoeff(),
               kTolClosed);
        report("closedform_phase", e,
               (kraus_superoperator(diag) - analytic_phase_superop(e)).cwiseAbs().maxCoeff(),
               kTolClosed);

        const Eigen::MatrixXcd mc_rot = mc_channel_estimate(
            [e](GaussianStream& g) { return planar_rotation(e * g.next()); }, cfg.trials,
            cfg.seed, cfg.workers);
        report("mc_superop_rotation", e,
               (mc_rot - kraus_superoperator(rot)).cwiseAbs().maxCoeff(), kTolMc);
        const Eigen::MatrixXcd mc_phase = mc_channel_estimate(
            [e](GaussianStream& g) { return noisy_cphase(0.0, e, g.next()); }, cfg.trials,
            cfg.seed + 1, cfg.workers);
        report("mc_superop_phase", e,
               (mc_phase - kraus_superoperator(diag)).cwiseAbs().maxCoeff(), kTolMc);

        double dot = 0.0;
        {
            cplx acc{0.0, 0.0};
            for (int i = 0; i < 4; ++i)
                acc += std::conj(ortho.set.ops[0].at(i, i)) * ortho.set.ops[1].at(i, i);
            dot = std::abs(acc);
        }
        report("diag_orthogonality", e, dot, kTolOrtho);

        const double p = phase_survival_p(e);
        const double f = ortho.f;
        const double quad =
            std::abs(std::sqrt(p * (1.0 - p)) * f * f + 2.0 * (1.0 + p) * f -
                     std::sqrt(p * (1.0 - p)));
        report("f_quadratic", e, quad, kTolOrtho);
    }

    if (!ok) throw ThresholdBreach("check failed: " + first_failure);
    return 0;
}

// ---------------------------------------------------------------------------
// grover-sim / qft-sim: raw engine access
// ---------------------------------------------------------------------------

struct SimCfg {
    int n = 8;
    double e = 0.01;
    int j = 0;  // grover only; 0 = optimal
    std::uint64_t marked = ~std::uint64_t{0};
    int rank = 1;
    std::string mode = "eigen";  // eigen | branch | mc
    std::string kraus = "eq4";
    long trials = 2000;
    std::uint64_t seed = 12345;
    int workers = 1;
    bool per_gate = false;
    bool choi_space = false;
    std::uint64_t input_seed = 0;  // qft only; 0 = |0...0>
    std::string out;
    std::string config_path;
};

void validate_sim(const SimCfg& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("invalid parameter: --n must be >= 1");
    if (cfg.e < 0.0) throw std::invalid_argument("invalid parameter: --e must be >= 0");
    if (cfg.rank < 1) throw std::invalid_argument("invalid parameter: --rank must be >= 1");
    if (cfg.mode != "eigen" && cfg.mode != "branch" && cfg.mode != "mc")
        throw std::invalid_argument("invalid parameter: --mode must be eigen, branch or mc");
    if (cfg.workers < 1) throw std::invalid_argument("invalid parameter: --workers must be >= 1");
    if (cfg.trials < 1) throw std::invalid_argument("invalid parameter: --trials must be >= 1");
    (void)parse_kraus(cfg.kraus);
}

void echo_sim(const SimCfg& cfg, int iterations, bool grover) {
    std::cerr << "# effective config\n";
    echo_kv(std::cerr, "n", std::to_string(cfg.n));
    echo_kv(std::cerr, "e", fmtg(cfg.e));
    if (grover) {
        echo_kv(std::cerr, "j", std::to_string(iterations));
        echo_kv(std::cerr, "marked", std::to_string(cfg.marked));
    } else {
        echo_kv(std::cerr, "input_seed", std::to_string(cfg.input_seed));
    }
    echo_kv(std::cerr, "rank", std::to_string(cfg.rank));
    echo_kv(std::cerr, "mode", cfg.mode);
    echo_kv(std::cerr, "kraus", cfg.kraus);
    echo_kv(std::cerr, "trials", std::to_string(cfg.trials));
    echo_kv(std::cerr, "seed", std::to_string(cfg.seed));
    echo_kv(std::cerr, "workers", std::to_string(cfg.workers));
    echo_kv(std::cerr, "space", cfg.choi_space ? "choi" : "state");
}

int cmd_grover_sim(SimCfg cfg) {
    validate_sim(cfg);
    GroverSpec spec;
    spec.n = cfg.n;
    spec.marked = cfg.marked == ~std::uint64_t{0} ? (std::uint64_t{1} << cfg.n) - 1 : cfg.marked;
    if (spec.marked >= (std::uint64_t{1} << cfg.n))
        throw std::invalid_argument("invalid parameter: --marked out of range");
    spec.iterations = cfg.j > 0 ? cfg.j : grover_optimal_iterations(cfg.n);
    echo_sim(cfg, spec.iterations, true);

    CsvOut csv(cfg.out);
    if (cfg.mode == "mc") {
        if (cfg.choi_space)
            throw std::invalid_argument("invalid parameter: --space choi needs eigen/branch mode");
        const std::vector<TrajectoryStats> stats =
            run_grover_mc_per_iteration(spec, cfg.e, cfg.trials, cfg.seed, cfg.workers);
        csv.header({"step", "mc_mean", "mc_stderr", "bound"});
        for (std::size_t j = 0; j < stats.size(); ++j) {
            csv.row({std::to_string(j), fmt10(stats[j].mean), fmt10(stats[j].stderr_),
                     fmt10(grover_fidelity_bound(cfg.n, static_cast<int>(j), cfg.e))});
        }
        csv.commit();
        return 0;
    }

    const int n_eff = cfg.choi_space ? 2 * cfg.n : cfg.n;
    guard_lowrank_memory(n_eff, cfg.rank);
    const Circuit circ = build_grover(spec);
    const std::vector<int> cps = grover_checkpoints(spec);
    const PureState input =
        cfg.choi_space ? entangled_input(cfg.n) : PureState::basis(cfg.n, 0);
    LowRankOptions opts;
    opts.kraus = parse_kraus(cfg.kraus);
    opts.mode = cfg.mode == "eigen" ? LowRankMode::EigenTruncate : LowRankMode::Branch;
    opts.rank = cfg.rank;
    opts.per_gate = cfg.per_gate;
    opts.has_marked = !cfg.choi_space;
    opts.marked = spec.marked;
    const std::vector<LowRankRecord> recs = run_lowrank_experiment(circ, cfg.e, input, cps, opts);
    csv.header({"step", "fidelity", "marked_prob", "trace"});
    for (const LowRankRecord& r : recs)
        csv.row({std::to_string(r.step), fmt10(r.fidelity), fmt10(r.marked_prob),
                 fmt10(r.survived_trace)});
    csv.commit();
    return 0;
}

int cmd_qft_sim(SimCfg cfg) {
    validate_sim(cfg);
    QftSpec spec{cfg.n};
    echo_sim(cfg, 0, false);

    CsvOut csv(cfg.out);
    if (cfg.mode == "mc") {
        if (cfg.choi_space)
            throw std::invalid_argument("invalid parameter: --space choi needs eigen/branch mode");
        const TrajectoryStats st =
            run_qft_mc(spec, cfg.e, cfg.trials, 1, cfg.seed, cfg.workers);
        csv.header({"n", "mc_mean", "mc_stderr", "naive", "refined"});
        csv.row({std::to_string(cfg.n), fmt10(st.mean), fmt10(st.stderr_),
                 fmt10(qft_fidelity_naive(cfg.n, cfg.e)), fmt10(qft_fidelity_refined(cfg.n, cfg.e))});
        csv.commit();
        return 0;
    }

    const int n_eff = cfg.choi_space ? 2 * cfg.n : cfg.n;
    guard_lowrank_memory(n_eff, cfg.rank);
    const Circuit circ = build_qft(spec);
    const std::vector<int> cps = qft_checkpoints(spec);
    PureState input = cfg.choi_space
                          ? entangled_input(cfg.n)
                          : (cfg.input_seed == 0 ? PureState::basis(cfg.n, 0)
                                                 : haar_random_state(cfg.n, cfg.input_seed));
    LowRankOptions opts;
    opts.kraus = parse_kraus(cfg.kraus);
    opts.mode = cfg.mode == "eigen" ? LowRankMode::EigenTruncate : LowRankMode::Branch;
    opts.rank = cfg.rank;
    opts.per_gate = cfg.per_gate;
    const std::vector<LowRankRecord> recs = run_lowrank_experiment(circ, cfg.e, input, cps, opts);
    csv.header({"step", "fidelity", "trace"});
    for (const LowRankRecord& r : recs)
        csv.row({std::to_string(r.step), fmt10(r.fidelity), fmt10(r.survived_trace)});
    csv.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisy-circuit simulator and estimator suite"};
    app.require_subcommand(1);

    EstimateCfg est;
    CLI::App* sub_est = app.add_subcommand("estimate", "closed-form accuracy estimates");
    sub_est->add_flag("--qft", est.qft, "emit the QFT bounds");
    sub_est->add_flag("--grover", est.grover, "emit the Grover bound");
    sub_est->add_option("--n", est.n, "qubit count");
    sub_est->add_option("--e", est.e, "error rate");
    sub_est->add_option("--j", est.j, "Grover iteration count");
    sub_est->add_option("--out", est.out, "output path (default stdout)");
    sub_est->add_option("--config", est.config_path, "config file (key = value lines)");

    Fig1Cfg f1;
    CLI::App* sub_f1 = app.add_subcommand("fig1", "low-rank Grover fidelity at two ranks (CSV)");
    sub_f1->add_option("--n", f1.n, "qubit count");
    sub_f1->add_option("--e", f1.e, "error rate");
    sub_f1->add_option("--rank1", f1.rank1, "first rank cap");
    sub_f1->add_option("--rank2", f1.rank2, "second rank cap");
    sub_f1->add_option("--j", f1.j, "iterations (0 = optimal)");
    sub_f1->add_option("--marked", f1.marked, "marked basis state (default all-ones)");
    sub_f1->add_option("--kraus", f1.kraus, "phase-noise Kraus form: eq4 | eq7");
    sub_f1->add_flag("--per-gate", f1.per_gate, "record after every gate");
    sub_f1->add_flag("--choi", f1.choi_space, "run in Choi space (2n qubits)");
    sub_f1->add_option("--out", f1.out, "output path (default stdout)");
    sub_f1->add_option("--config", f1.config_path, "config file (key = value lines)");

    Fig2Cfg f2;
    CLI::App* sub_f2 = app.add_subcommand("fig2", "QFT Monte Carlo vs bounds sweep (CSV)");
    sub_f2->add_option("--e", f2.e, "error rate");
    sub_f2->add_option("--nmin", f2.nmin, "sweep start");
    sub_f2->add_option("--nmax", f2.nmax, "sweep end");
    sub_f2->add_option("--trials", f2.trials, "trajectories per n");
    sub_f2->add_option("--inputs-per-trial", f2.inputs_per_trial, "Haar inputs per trajectory");
    sub_f2->add_option("--seed", f2.seed, "RNG seed");
    sub_f2->add_option("--workers", f2.workers, "worker threads");
    sub_f2->add_option("--out", f2.out, "output path (default stdout)");
    sub_f2->add_option("--config", f2.config_path, "config file (key = value lines)");

    Fig3Cfg f3;
    CLI::App* sub_f3 = app.add_subcommand("fig3", "refined QFT accuracy table (CSV)");
    sub_f3->add_option("--e-list", f3.e_list, "error rates")->delimiter(',');
    sub_f3->add_option("--nmax", f3.nmax, "largest qubit count");
    sub_f3->add_option("--out", f3.out, "output path (default stdout)");
    sub_f3->add_option("--config", f3.config_path, "config file (key = value lines)");

    ChannelCheckCfg cc;
    CLI::App* sub_cc = app.add_subcommand("channel-check", "channel-representation equivalences");
    sub_cc->add_option("--e-grid", cc.e_grid, "error rates")->delimiter(',');
    sub_cc->add_option("--trials", cc.trials, "Monte Carlo draws");
    sub_cc->add_option("--seed", cc.seed, "RNG seed");
    sub_cc->add_option("--workers", cc.workers, "worker threads");
    sub_cc->add_flag("--corrupt", cc.corrupt, "perturb one Kraus set (negative-test fixture)");
    sub_cc->add_option("--config", cc.config_path, "config file (key = value lines)");

    SimCfg gs;
    CLI::App* sub_gs = app.add_subcommand("grover-sim", "raw Grover runs (CSV)");
    sub_gs->add_option("--n", gs.n, "qubit count");
    sub_gs->add_option("--e", gs.e, "error rate");
    sub_gs->add_option("--j", gs.j, "iterations (0 = optimal)");
    sub_gs->add_option("--marked", gs.marked, "marked basis state (default all-ones)");
    sub_gs->add_option("--rank", gs.rank, "rank cap");
    sub_gs->add_option("--mode", gs.mode, "eigen | branch | mc");
    sub_gs->add_option("--kraus", gs.kraus, "phase-noise Kraus form: eq4 | eq7");
    sub_gs->add_option("--trials", gs.trials, "trajectories (mc mode)");
    sub_gs->add_option("--seed", gs.seed, "RNG seed");
    sub_gs->add_option("--workers", gs.workers, "worker threads");
    sub_gs->add_flag("--per-gate", gs.per_gate, "record after every gate");
    sub_gs->add_flag("--choi", gs.choi_space, "run in Choi space (2n qubits)");
    sub_gs->add_option("--out", gs.out, "output path (default stdout)");
    sub_gs->add_option("--config", gs.config_path, "config file (key = value lines)");

    SimCfg qs;
    CLI::App* sub_qs = app.add_subcommand("qft-sim", "raw QFT runs (CSV)");
    sub_qs->add_option("--n", qs.n, "qubit count");
    sub_qs->add_option("--e", qs.e, "error rate");
    sub_qs->add_option("--rank", qs.rank, "rank cap");
    sub_qs->add_option("--mode", qs.mode, "eigen | branch | mc");
    sub_qs->add_option("--kraus", qs.kraus, "phase-noise Kraus form: eq4 | eq7");
    sub_qs->add_option("--input-seed", qs.input_seed, "Haar input seed (0 = |0...0>)");
    sub_qs->add_option("--trials", qs.trials, "trajectories (mc mode)");
    sub_qs->add_option("--seed", qs.seed, "RNG seed");
    sub_qs->add_option("--workers", qs.workers, "worker threads");
    sub_qs->add_flag("--per-gate", qs.per_gate, "record after every gate");
    sub_qs->add_flag("--choi", qs.choi_space, "run in Choi space (2n qubits)");
    sub_qs->add_option("--out", qs.out, "output path (default stdout)");
    sub_qs->add_option("--config", qs.config_path, "config file (key = value lines)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sub_est->parsed()) {
            ConfigApplier a(sub_est, est.config_path);
            a.opt("n", est.n);
            a.opt("e", est.e);
            a.opt("j", est.j);
            a.opt("qft", est.qft);
            a.opt("grover", est.grover);
            a.opt("out", est.out);
            a.finish();
            return cmd_estimate(est);
        }
        if (sub_f1->parsed()) {
            ConfigApplier a(sub_f1, f1.config_path);
            a.opt("n", f1.n);
            a.opt("e", f1.e);
            a.opt("rank1", f1.rank1);
            a.opt("rank2", f1.rank2);
            a.opt("j", f1.j);
            a.opt("marked", f1.marked);
            a.opt("kraus", f1.kraus);
            a.opt("per-gate", f1.per_gate);
            a.opt("choi", f1.choi_space);
            a.opt("out", f1.out);
            a.finish();
            return cmd_fig1(f1);
        }
        if (sub_f2->parsed()) {
            ConfigApplier a(sub_f2, f2.config_path);
            a.opt("e", f2.e);
            a.opt("nmin", f2.nmin);
            a.opt("nmax", f2.nmax);
            a.opt("trials", f2.trials);
            a.opt("inputs-per-trial", f2.inputs_per_trial);
            a.opt("seed", f2.seed);
            a.opt("workers", f2.workers);
            a.opt("out", f2.out);
            a.finish();
            return cmd_fig2(f2);
        }
        if (sub_f3->parsed()) {
            ConfigApplier a(sub_f3, f3.config_path);
            a.opt("e-list", f3.e_list);
            a.opt("nmax", f3.nmax);
            a.opt("out", f3.out);
            a.finish();
            return cmd_fig3(f3);
        }
        if (sub_cc->parsed()) {
            ConfigApplier a(sub_cc, cc.config_path);
            a.opt("e-grid", cc.e_grid);
            a.opt("trials", cc.trials);
            a.opt("seed", cc.seed);
            a.opt("workers", cc.workers);
            a.opt("corrupt", cc.corrupt);
            a.finish();
            return cmd_channel_check(cc);
        }
        auto apply_sim = [](CLI::App* sub, SimCfg& cfg) {
            ConfigApplier a(sub, cfg.config_path);
            a.opt("n", cfg.n);
            a.opt("e", cfg.e);
            a.opt("j", cfg.j);
            a.opt("marked", cfg.marked);
            a.opt("rank", cfg.rank);
            a.opt("mode", cfg.mode);
            a.opt("kraus", cfg.kraus);
            a.opt("trials", cfg.trials);
            a.opt("seed", cfg.seed);
            a.opt("workers", cfg.workers);
            a.opt("per-gate", cfg.per_gate);
            a.opt("choi", cfg.choi_space);
            a.opt("input-seed", cfg.input_seed);
            a.opt("out", cfg.out);
            a.finish();
        };
        if (sub_gs->parsed()) {
            apply_sim(sub_gs, gs);
            return cmd_grover_sim(gs);
        }
        if (sub_qs->parsed()) {
            apply_sim(sub_qs, qs);
            return cmd_qft_sim(qs);
        }
    } catch (const ThresholdBreach& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const ResourceGuard& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
