#include <doctest.h>

#include <chrono>

#include "dss/rng.hpp"
#include "dss/tableau.hpp"

using namespace dss;

namespace {

int measure_with(StabilizerState& state, std::uint32_t q, Basis b, Rng& rng) {
    return state.measure(q, b, rng_coins(rng)).outcome;
}

bool rows_commute_and_independent(const StabilizerState& state) {
    const std::size_t n = state.num_qubits();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!state.stabilizer_row(i).commutes_with(state.stabilizer_row(j))) return false;
    return state.stabilizer_rank() == n;
}

bool destabilizers_paired(const StabilizerState& state) {
    const std::size_t n = state.num_qubits();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool commute = state.stabilizer_row(i).commutes_with(state.destabilizer_row(j));
            if ((i == j) == commute) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("zero state is stabilized by Z on every qubit") {
    StabilizerState state(7);
    Rng rng = make_stream(1, 0);
    for (std::uint32_t q = 0; q < 7; ++q) {
        PauliOperator z(7);
        z.set_pauli(q, 3);
        CHECK(state.is_stabilized_by(z));
        auto res = state.measure(q, Basis::Z, rng_coins(rng));
        CHECK(res.outcome == 0);
        CHECK(res.deterministic);
    }
    CHECK_THROWS(StabilizerState(0));
}

TEST_CASE("zero state is not stabilized by X, and signs matter") {
    StabilizerState state(1);
    CHECK(state.is_stabilized_by(PauliOperator::from_string("+Z")));
    CHECK_FALSE(state.is_stabilized_by(PauliOperator::from_string("-Z")));
    CHECK_FALSE(state.is_stabilized_by(PauliOperator::from_string("+X")));
}

TEST_CASE("H then X measurement is deterministic +1") {
    StabilizerState state(1);
    state.apply_gate(Gate::H, 0);
    Rng rng = make_stream(2, 0);
    auto res = state.measure(0, Basis::X, rng_coins(rng));
    CHECK(res.outcome == 0);
    CHECK(res.deterministic);
}

TEST_CASE("Z measurement of |+> is a fair coin and projects") {
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        StabilizerState state(1);
        state.apply_gate(Gate::H, 0);
        Rng rng = make_stream(3, seed);
        auto res = state.measure(0, Basis::Z, rng_coins(rng));
        CHECK_FALSE(res.deterministic);
        ones += res.outcome;
        // Repeating the measurement must reproduce the outcome deterministically.
        auto again = state.measure(0, Basis::Z, rng_coins(rng));
        CHECK(again.deterministic);
        CHECK(again.outcome == res.outcome);
    }
    CHECK(ones > 150);  // ~3 sigma around 200
    CHECK(ones < 250);
}

TEST_CASE("GHZ ladder produces the expected stabilizer group") {
    StabilizerState state(4);
    state.apply_gate(Gate::H, 0);
    state.apply_gate(Gate::CNOT, 0, 1);
    state.apply_gate(Gate::CNOT, 1, 2);
    state.apply_gate(Gate::CNOT, 2, 3);
    for (const char* s : {"+XXXX", "+ZZII", "+IZZI", "+IIZZ"})
        CHECK(state.is_stabilized_by(PauliOperator::from_string(s)));
    CHECK_FALSE(state.is_stabilized_by(PauliOperator::from_string("+ZIII")));
    CHECK(rows_commute_and_independent(state));
    CHECK(destabilizers_paired(state));
}

TEST_CASE("CNOT conjugation of Pauli frames") {
    // X(x)I -> X(x)X and I(x)Z -> Z(x)Z through a CNOT.
    StabilizerState state(2);
    state.apply_gate(Gate::H, 0);  // stabilizers X I, I Z
    state.apply_gate(Gate::CNOT, 0, 1);
    CHECK(state.is_stabilized_by(PauliOperator::from_string("+XX")));
    CHECK(state.is_stabilized_by(PauliOperator::from_string("+ZZ")));
}

TEST_CASE("apply_pauli flips anticommuting signs; identity is a no-op") {
    StabilizerState state(4);
    const PauliOperator id = PauliOperator::identity(4);
    state.apply_pauli(id);
    PauliOperator z0(4);
    z0.set_pauli(0, 3);
    CHECK(state.is_stabilized_by(z0));

    PauliOperator x0(4);
    x0.set_pauli(0, 1);
    state.apply_pauli(x0);
    Rng rng = make_stream(4, 0);
    CHECK(measure_with(state, 0, Basis::Z, rng) == 1);

    // Applying the same Pauli twice restores every sign.
    StabilizerState reference(4);
    reference.apply_gate(Gate::H, 2);
    reference.apply_gate(Gate::CNOT, 2, 3);
    StabilizerState twice = reference;
    PauliOperator mixed = PauliOperator::from_string("+XZYI");
    twice.apply_pauli(mixed);
    twice.apply_pauli(mixed);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(twice.stabilizer_row(i).to_string() == reference.stabilizer_row(i).to_string());
    }
}

TEST_CASE("two-qubit Pauli payload acts as one fault of Pauli weight 2") {
    StabilizerState state(2);
    const PauliOperator xz = PauliOperator::from_string("+XZ");
    CHECK(xz.weight() == 2);
    state.apply_pauli(xz);
    Rng rng = make_stream(5, 0);
    CHECK(measure_with(state, 0, Basis::Z, rng) == 1);  // X part flips qubit 0
    CHECK(measure_with(state, 1, Basis::Z, rng) == 0);  // Z part is invisible in Z basis
}

TEST_CASE("invariants hold after a random Clifford sequence") {
    StabilizerState state(6);
    Rng rng = make_stream(6, 0);
    for (int step = 0; step < 200; ++step) {
        switch (uniform_below(rng, 4)) {
            case 0: state.apply_gate(Gate::H, static_cast<std::uint32_t>(uniform_below(rng, 6))); break;
            case 1: state.apply_gate(Gate::S, static_cast<std::uint32_t>(uniform_below(rng, 6))); break;
            case 2: {
                const auto a = static_cast<std::uint32_t>(uniform_below(rng, 6));
                const auto b = static_cast<std::uint32_t>(uniform_below(rng, 5));
                state.apply_gate(Gate::CNOT, a, b >= a ? b + 1 : b);
                break;
            }
            default:
                state.measure(static_cast<std::uint32_t>(uniform_below(rng, 6)), Basis::Z,
                              rng_coins(rng));
        }
    }
    CHECK(rows_commute_and_independent(state));
    CHECK(destabilizers_paired(state));
}

TEST_CASE("reset re-prepares a qubit without consuming coins") {
    StabilizerState state(2);
    state.apply_gate(Gate::H, 0);
    state.apply_gate(Gate::CNOT, 0, 1);
    state.reset(0, Basis::Z);
    PauliOperator z0(2);
    z0.set_pauli(0, 3);
    CHECK(state.is_stabilized_by(z0));
    state.reset(1, Basis::X);
    PauliOperator x1(2);
    x1.set_pauli(1, 1);
    CHECK(state.is_stabilized_by(x1));
}

TEST_CASE("simulation cost grows polynomially (smoke)") {
    auto run = [](std::size_t n) {
        StabilizerState state(n);
        Rng rng = make_stream(7, n);
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t g = 0; g < 2000; ++g) {
            const auto a = static_cast<std::uint32_t>(uniform_below(rng, n));
            const auto b = static_cast<std::uint32_t>(uniform_below(rng, n - 1));
            state.apply_gate(Gate::CNOT, a, b >= a ? b + 1 : b);
        }
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    const double small = run(16);
    const double large = run(128);
    // 8x the qubits on a word-packed tableau; generous factor keeps the check
    // robust against timer noise while still catching exponential blowup.
    CHECK(large < 1000.0 * (small + 1e-4));
}
