#include <cmath>

#include "doctest.h"
#include "qsim/circuits.hpp"
#include "qsim/state.hpp"

using namespace qsim;

namespace {

int count_kind(const Circuit& c, StepKind k, bool noisy_only = false) {
    int count = 0;
    for (const CircuitStep& s : c.steps)
        if (s.kind == k && (!noisy_only || s.noisy)) ++count;
    return count;
}

}  // namespace

TEST_CASE("build_grover: structure and noisy-gate accounting") {
    const Circuit small = build_grover({2, 3, 1});
    CHECK(count_kind(small, StepKind::Hadamard, true) == 6);
    CHECK(count_kind(small, StepKind::OraclePhaseFlip) == 1);
    CHECK(count_kind(small, StepKind::ZeroPhaseFlip) == 1);

    for (int n = 1; n <= 20; ++n) {
        for (int j : {0, 1, 7, 50}) {
            const Circuit c = build_grover({n, 0, j});
            CHECK(count_kind(c, StepKind::Hadamard, true) == n + 2 * n * j);
            CHECK(count_noisy_steps(c) == n + 2 * n * j);
            CHECK(count_kind(c, StepKind::OraclePhaseFlip) == j);
        }
    }
    CHECK_THROWS_AS((void)build_grover({2, 4, 1}), std::out_of_range);
}

TEST_CASE("build_grover: n=2 single iteration finds the marked state exactly") {
    const Circuit c = build_grover({2, 3, 1});
    const PureState out = run_ideal(c, PureState::basis(2, 0));
    CHECK(std::norm(out.amps[3]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_qft: gate inventory") {
    const Circuit one = build_qft(QftSpec{1});
    CHECK(one.steps.size() == 1);
    CHECK(one.steps[0].kind == StepKind::Hadamard);

    for (int n = 1; n <= 20; ++n) {
        const Circuit c = build_qft(QftSpec{n});
        CHECK(count_kind(c, StepKind::Hadamard) == n);
        CHECK(count_kind(c, StepKind::CPhase) == n * (n - 1) / 2);
        CHECK(static_cast<int>(c.steps.size()) == n + n * (n - 1) / 2);
        for (const CircuitStep& s : c.steps) CHECK(s.noisy);
    }
}

TEST_CASE("build_qft: zero state maps to the uniform superposition") {
    for (int n : {1, 3, 5}) {
        const PureState out = run_ideal(build_qft(QftSpec{n}), PureState::basis(n, 0));
        const double expect = std::pow(2.0, -n / 2.0);
        for (const cplx& a : out.amps) {
            CHECK(a.real() == doctest::Approx(expect).epsilon(1e-12));
            CHECK(std::abs(a.imag()) < 1e-12);
        }
    }
}

TEST_CASE("ideal_grover_success closed form") {
    CHECK(ideal_grover_success(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
    for (int n = 1; n <= 14; ++n)
        CHECK(ideal_grover_success(n, 0) == doctest::Approx(std::pow(2.0, -n)).epsilon(1e-13));

    const int n = 12;
    const int j = grover_optimal_iterations(n);
    CHECK(ideal_grover_success(n, j) > 0.999);

    // cross-check the closed form against the simulated circuit at e = 0
    const std::uint64_t marked = 0x5a5 & ((1u << n) - 1);
    const PureState psi = run_ideal(build_grover({n, marked, j}), PureState::basis(n, 0));
    CHECK(std::norm(psi.amps[marked]) == doctest::Approx(ideal_grover_success(n, j)).epsilon(1e-10));
}

TEST_CASE("grover at e=0 matches the closed form at every iteration") {
    for (int n = 2; n <= 10; n += 2) {
        const int jmax = 2 * grover_optimal_iterations(n);
        const std::uint64_t marked = (std::uint64_t{1} << n) - 2;
        GroverSpec spec{n, marked, jmax};
        const Circuit c = build_grover(spec);
        const std::vector<int> cps = grover_checkpoints(spec);
        PureState psi = PureState::basis(n, 0);
        std::size_t cp = 0;
        for (std::size_t s = 0; s < c.steps.size(); ++s) {
            psi = apply_ideal_step(psi, c.steps[s]);
            if (cp < cps.size() && static_cast<int>(s) == cps[cp]) {
                CHECK(std::norm(psi.amps[marked]) ==
                      doctest::Approx(ideal_grover_success(n, static_cast<int>(cp))).epsilon(1e-10));
                ++cp;
            }
        }
        CHECK(cp == cps.size());
    }
}

TEST_CASE("ideal_qft_reference: zero state, unitarity and circuit agreement") {
    const PureState uniform = ideal_qft_reference(PureState::basis(4, 0));
    for (const cplx& a : uniform.amps)
        CHECK(std::abs(a - cplx{0.25, 0.0}) < 1e-12);

    for (int n = 1; n <= 6; ++n) {
        const Circuit c = build_qft(QftSpec{n});
        // 200 Haar states split over the sizes; this also pins the
        // bit-order convention of the reference
        const int reps = 200 / 6 + 1;
        for (int r = 0; r < reps; ++r) {
            const PureState in = haar_random_state(n, 9000 + static_cast<std::uint64_t>(n * 100 + r));
            const PureState ref = ideal_qft_reference(in);
            CHECK(norm2(ref) == doctest::Approx(1.0).epsilon(1e-12));
            const PureState out = run_ideal(c, in);
            CHECK(overlap_fidelity(ref, out) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("build_qft equals the reference as an operator on basis states") {
    for (int n = 1; n <= 6; ++n) {
        const Circuit c = build_qft(QftSpec{n});
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
            const PureState in = PureState::basis(n, b);
            const PureState ref = ideal_qft_reference(in);
            const PureState out = run_ideal(c, in);
            for (std::size_t i = 0; i < out.dim(); ++i)
                CHECK(std::abs(out.amps[i] - ref.amps[i]) < 1e-10);
        }
    }
}

TEST_CASE("e=0 circuits are unitary end to end") {
    for (int n : {2, 4, 6}) {
        const PureState in = haar_random_state(n, 31 + static_cast<std::uint64_t>(n));
        const PureState g = run_ideal(build_grover({n, 1, 3}), in);
        CHECK(norm2(g) == doctest::Approx(1.0).epsilon(1e-10));
        const PureState q = run_ideal(build_qft(QftSpec{n}), in);
        CHECK(norm2(q) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("checkpoint layout") {
    GroverSpec spec{3, 0, 2};
    const std::vector<int> cps = grover_checkpoints(spec);
    REQUIRE(cps.size() == 3);
    CHECK(cps[0] == 2);   // after the initial 3 Hadamards
    CHECK(cps[1] == 10);  // + oracle, 3 H, zero, 3 H
    CHECK(cps[2] == 18);
    const Circuit c = build_grover(spec);
    CHECK(cps.back() == static_cast<int>(c.steps.size()) - 1);

    const std::vector<int> qcp = qft_checkpoints(QftSpec{5});
    REQUIRE(qcp.size() == 1);
    CHECK(qcp[0] == static_cast<int>(build_qft(QftSpec{5}).steps.size()) - 1);
}

TEST_CASE("circuit embedded on half of an entangled pair acts as I (x) U") {
    // oracle: column-wise construction sum_i |i> (x) U|i> / sqrt(d) from
    // narrow per-basis runs, no wide-state code path involved
    const int n = 2;
    const Circuit c = build_grover({n, 2, 2});
    const std::size_t d = std::size_t{1} << n;

    PureState expect;
    expect.n = 2 * n;
    expect.amps.assign(d * d, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < d; ++i) {
        const PureState col = run_ideal(c, PureState::basis(n, i));
        for (std::size_t m = 0; m < d; ++m)
            expect.amps[(i << n) | m] = col.amps[m] / std::sqrt(static_cast<double>(d));
    }

    PureState entangled;
    entangled.n = 2 * n;
    entangled.amps.assign(d * d, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < d; ++i)
        entangled.amps[(i << n) | i] = 1.0 / std::sqrt(static_cast<double>(d));
    const PureState got = run_ideal(c, entangled);

    for (std::size_t k = 0; k < expect.dim(); ++k)
        CHECK(std::abs(got.amps[k] - expect.amps[k]) < 1e-12);
}
