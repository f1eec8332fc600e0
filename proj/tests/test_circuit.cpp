#include <doctest.h>

#include "dss/circuit.hpp"
#include "dss/rng.hpp"

using namespace dss;

namespace {

Circuit ghz_circuit() {
    Circuit c("GHZ", 5);
    for (std::uint32_t q = 0; q < 5; ++q) c.init(q);
    c.gate(Gate::H, 0);
    c.gate(Gate::CNOT, 0, 1);
    c.gate(Gate::CNOT, 1, 2);
    c.gate(Gate::CNOT, 2, 3);
    c.gate(Gate::CNOT, 0, 4);
    c.gate(Gate::CNOT, 3, 4);
    c.measure(4);
    return c;
}

}  // namespace

TEST_CASE("category counts") {
    const auto counts = ghz_circuit().category_counts();
    CHECK(counts[static_cast<int>(LocationKind::single_qubit_gate)] == 1);
    CHECK(counts[static_cast<int>(LocationKind::two_qubit_gate)] == 5);
    CHECK(counts[static_cast<int>(LocationKind::init)] == 5);
    CHECK(counts[static_cast<int>(LocationKind::measurement)] == 1);

    Circuit empty("empty", 1);
    for (auto v : empty.category_counts()) CHECK(v == 0);

    Circuit meas7("meas", 7);
    for (std::uint32_t q = 0; q < 7; ++q) meas7.measure(q);
    const auto m = meas7.category_counts();
    CHECK(m[static_cast<int>(LocationKind::measurement)] == 7);
    CHECK(m[static_cast<int>(LocationKind::single_qubit_gate)] == 0);
}

TEST_CASE("fault-free GHZ run never flags") {
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        StabilizerState state(5);
        Rng rng = make_stream(9, seed);
        const MeasurementRecord rec = run_with_faults(state, ghz_circuit(), FaultEvent{}, rng);
        REQUIRE(rec.size() == 1);
        CHECK(rec.bit(0) == 0);
    }
}

TEST_CASE("X fault after a middle CNOT propagates to the flag") {
    // X on qubit 2 after CNOT(1,2): spreads to qubits 2,3 and flips Z0Z3.
    const Circuit c = ghz_circuit();
    FaultEvent fault;
    fault.entries[7] = FaultPayload{{0, 1}, false};  // location 7 = CNOT(1,2), payload I(x)X
    StabilizerState state(5);
    Rng rng = make_stream(10, 0);
    const MeasurementRecord rec = run_with_faults(state, c, fault, rng);
    CHECK(rec.bit(0) == 1);
    // The data error is X on qubits 2 and 3; undoing it restores a state with
    // the Z0Z3 stabilizer.
    PauliOperator expect(5);
    expect.set_pauli(2, 1);
    expect.set_pauli(3, 1);
    state.apply_pauli(expect);
    CHECK(state.is_stabilized_by(PauliOperator::from_string("+ZIIZI")));
}

TEST_CASE("measurement fault flips the record but not the state") {
    Circuit c("m", 1);
    c.measure(0);
    FaultEvent flip;
    flip.entries[0] = FaultPayload{{0, 0}, true};
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        StabilizerState plain(1), faulted(1);
        Rng r1 = make_stream(11, seed), r2 = make_stream(11, seed);
        const int clean = run_with_faults(plain, c, FaultEvent{}, r1).bit(0);
        const int noisy = run_with_faults(faulted, c, flip, r2).bit(0);
        CHECK(noisy == (clean ^ 1));
        // The post-measurement state keeps the true projection.
        Rng r3 = make_stream(12, seed);
        CHECK(faulted.measure(0, Basis::Z, rng_coins(r3)).outcome == clean);
    }
}

TEST_CASE("init fault flips the prepared state") {
    Circuit c("i", 1);
    c.init(0);
    c.measure(0);
    FaultEvent flip;
    flip.entries[0] = FaultPayload{{0, 0}, true};
    StabilizerState state(1);
    Rng rng = make_stream(13, 0);
    CHECK(run_with_faults(state, c, flip, rng).bit(0) == 1);
}

TEST_CASE("determinism and Pauli involution") {
    const Circuit c = ghz_circuit();
    FaultEvent fault;
    fault.entries[5] = FaultPayload{{2, 0}, false};  // Y after H
    fault.entries[8] = FaultPayload{{1, 3}, false};  // X(x)Z after CNOT(2,3)
    StabilizerState s1(5), s2(5);
    Rng r1 = make_stream(14, 7), r2 = make_stream(14, 7);
    CHECK(run_with_faults(s1, c, fault, r1) == run_with_faults(s2, c, fault, r2));

    // A fault applied twice at the same spot cancels exactly: inject the
    // payload a second time right after the first and compare to fault-free.
    StabilizerState clean_state(5), doubled_state(5);
    Rng rc = make_stream(15, 3), rd = make_stream(15, 3);
    const MeasurementRecord clean = run_with_faults(clean_state, c, FaultEvent{}, rc);
    PauliOperator payload(5);
    payload.set_pauli(2, 1);
    MeasurementRecord doubled;
    {
        // Run manually: execute locations, applying the fault Pauli twice
        // after location 7.
        const CoinSource coins = rng_coins(rd);
        StabilizerState& st = doubled_state;
        for (const Location& loc : c.locations()) {
            switch (loc.kind) {
                case LocationKind::single_qubit_gate: st.apply_gate(loc.gate, loc.targets[0]); break;
                case LocationKind::two_qubit_gate:
                    st.apply_gate(loc.gate, loc.targets[0], loc.targets[1]);
                    break;
                case LocationKind::init: st.reset(loc.targets[0], loc.basis); break;
                case LocationKind::measurement:
                    doubled.outcomes.emplace_back(
                        loc.index,
                        static_cast<std::uint8_t>(st.measure(loc.targets[0], loc.basis, coins).outcome));
                    break;
            }
            if (loc.index == 7) {
                st.apply_pauli(payload);
                st.apply_pauli(payload);
            }
        }
    }
    CHECK(doubled == clean);
}

TEST_CASE("fault validation") {
    const Circuit c = ghz_circuit();
    FaultEvent bad;
    bad.entries[99] = FaultPayload{{1, 0}, false};
    CHECK_THROWS(c.check_fault(bad));
    FaultEvent arity;
    arity.entries[5] = FaultPayload{{1, 2}, false};  // two-qubit payload on H
    CHECK_THROWS(c.check_fault(arity));
    FaultEvent ident;
    ident.entries[6] = FaultPayload{{0, 0}, false};  // identity on a CNOT
    CHECK_THROWS(c.check_fault(ident));
    FaultEvent pauli_on_meas;
    pauli_on_meas.entries[11] = FaultPayload{{1, 0}, false};
    CHECK_THROWS(c.check_fault(pauli_on_meas));
}

TEST_CASE("serialize/parse round trip") {
    const Circuit c = ghz_circuit();
    const std::string text = c.serialize();
    const Circuit back = Circuit::parse(text, "GHZ");
    CHECK(back.serialize() == text);
    CHECK(back.n_qubits() == c.n_qubits());
    CHECK(back.size() == c.size());
    StabilizerState s1(5), s2(5);
    Rng r1 = make_stream(16, 1), r2 = make_stream(16, 1);
    CHECK(run_with_faults(s1, c, FaultEvent{}, r1) == run_with_faults(s2, back, FaultEvent{}, r2));
}

TEST_CASE("parse rejects malformed text") {
    CHECK_THROWS(Circuit::parse(""));
    CHECK_THROWS(Circuit::parse("single_qubit_gate H 0\n"));             // missing header
    CHECK_THROWS(Circuit::parse("qubits: 2\nsingle_qubit_gate Q 0\n"));  // unknown gate
    CHECK_THROWS(Circuit::parse("qubits: 2\ntwo_qubit_gate CNOT 0\n"));  // bad arity
    CHECK_THROWS(Circuit::parse("qubits: 2\ninit W 0\n"));               // bad basis
    CHECK_NOTHROW(Circuit::parse("qubits: 2\n# comment\ninit Z 0\nmeasurement X 1\n"));
}
