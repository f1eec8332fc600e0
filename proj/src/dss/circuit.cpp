#include "dss/circuit.hpp"

#include <sstream>
#include <stdexcept>

namespace dss {

const char* location_kind_name(LocationKind k) {
    switch (k) {
        case LocationKind::single_qubit_gate: return "single_qubit_gate";
        case LocationKind::two_qubit_gate: return "two_qubit_gate";
        case LocationKind::init: return "init";
        case LocationKind::measurement: return "measurement";
    }
    return "?";
}

Circuit& Circuit::gate(Gate g, std::uint32_t a) {
    if (gate_is_two_qubit(g)) throw std::invalid_argument("Circuit::gate: two-qubit gate needs two targets");
    if (a >= n_qubits_) throw std::out_of_range("Circuit::gate: target");
    locations_.push_back({locations_.size(), LocationKind::single_qubit_gate, g, Basis::Z, {a}});
    return *this;
}

Circuit& Circuit::gate(Gate g, std::uint32_t a, std::uint32_t b) {
    if (!gate_is_two_qubit(g)) throw std::invalid_argument("Circuit::gate: single-qubit gate takes one target");
    if (a >= n_qubits_ || b >= n_qubits_) throw std::out_of_range("Circuit::gate: target");
    if (a == b) throw std::invalid_argument("Circuit::gate: repeated targets");
    locations_.push_back({locations_.size(), LocationKind::two_qubit_gate, g, Basis::Z, {a, b}});
    return *this;
}

Circuit& Circuit::init(std::uint32_t q, Basis b) {
    if (q >= n_qubits_) throw std::out_of_range("Circuit::init: target");
    locations_.push_back({locations_.size(), LocationKind::init, Gate::I, b, {q}});
    return *this;
}

Circuit& Circuit::measure(std::uint32_t q, Basis b) {
    if (q >= n_qubits_) throw std::out_of_range("Circuit::measure: target");
    locations_.push_back({locations_.size(), LocationKind::measurement, Gate::I, b, {q}});
    ++num_measurements_;
    return *this;
}

std::array<std::uint64_t, kNumLocationKinds> Circuit::category_counts() const {
    std::array<std::uint64_t, kNumLocationKinds> counts{};
    for (const auto& loc : locations_) counts[static_cast<std::size_t>(loc.kind)]++;
    return counts;
}

void Circuit::check_fault(const FaultEvent& event) const {
    for (const auto& [index, payload] : event.entries) {
        if (index >= locations_.size()) throw std::invalid_argument("FaultEvent: unknown location");
        const Location& loc = locations_[index];
        switch (loc.kind) {
            case LocationKind::single_qubit_gate:
                if (payload.pauli[0] == 0 || payload.pauli[1] != 0)
                    throw std::invalid_argument("FaultEvent: bad single-qubit payload");
                break;
            case LocationKind::two_qubit_gate:
                if (payload.pauli[0] == 0 && payload.pauli[1] == 0)
                    throw std::invalid_argument("FaultEvent: identity two-qubit payload");
                break;
            case LocationKind::init:
            case LocationKind::measurement:
                if (payload.pauli[0] != 0 || payload.pauli[1] != 0)
                    throw std::invalid_argument("FaultEvent: init/measurement faults are flips");
                break;
        }
    }
}

static void apply_payload_pauli(StabilizerState& state, const Location& loc, const FaultPayload& payload) {
    PauliOperator p(state.num_qubits());
    for (std::size_t i = 0; i < loc.targets.size(); ++i)
        if (payload.pauli[i] != 0) p.set_pauli(loc.targets[i], payload.pauli[i]);
    state.apply_pauli(p);
}

MeasurementRecord run_with_faults(StabilizerState& state, const Circuit& circuit,
                                  const FaultEvent& fault, const CoinSource& coin) {
    if (state.num_qubits() < circuit.n_qubits())
        throw std::invalid_argument("run_with_faults: state smaller than circuit");
    circuit.check_fault(fault);
    MeasurementRecord record;
    record.outcomes.reserve(circuit.num_measurements());
    for (const Location& loc : circuit.locations()) {
        auto it = fault.entries.find(loc.index);
        const FaultPayload* payload = it == fault.entries.end() ? nullptr : &it->second;
        switch (loc.kind) {
            case LocationKind::single_qubit_gate:
                state.apply_gate(loc.gate, loc.targets[0]);
                if (payload) apply_payload_pauli(state, loc, *payload);
                break;
            case LocationKind::two_qubit_gate:
                state.apply_gate(loc.gate, loc.targets[0], loc.targets[1]);
                if (payload) apply_payload_pauli(state, loc, *payload);
                break;
            case LocationKind::init: {
                state.reset(loc.targets[0], loc.basis);
                if (payload && payload->flip) {
                    // Flip |0>-><|1> or |+>-><|->.
                    state.apply_gate(loc.basis == Basis::Z ? Gate::X : Gate::Z, loc.targets[0]);
                }
                break;
            }
            case LocationKind::measurement: {
                MeasureResult res = state.measure(loc.targets[0], loc.basis, coin);
                int bit = res.outcome;
                if (payload && payload->flip) bit ^= 1;
                record.outcomes.emplace_back(loc.index, static_cast<std::uint8_t>(bit));
                break;
            }
        }
    }
    return record;
}

MeasurementRecord run_with_faults(StabilizerState& state, const Circuit& circuit,
                                  const FaultEvent& fault, Rng& rng) {
    return run_with_faults(state, circuit, fault, rng_coins(rng));
}

std::string Circuit::serialize() const {
    std::ostringstream out;
    out << "qubits: " << n_qubits_ << "\n";
    for (const Location& loc : locations_) {
        switch (loc.kind) {
            case LocationKind::single_qubit_gate:
            case LocationKind::two_qubit_gate:
                out << location_kind_name(loc.kind) << ' ' << gate_name(loc.gate);
                break;
            case LocationKind::init:
            case LocationKind::measurement:
                out << location_kind_name(loc.kind) << ' ' << (loc.basis == Basis::Z ? 'Z' : 'X');
                break;
        }
        for (auto t : loc.targets) out << ' ' << t;
        out << "\n";
    }
    return out.str();
}

static Gate parse_gate(const std::string& name) {
    for (Gate g : {Gate::I, Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::S, Gate::CNOT})
        if (name == gate_name(g)) return g;
    throw std::invalid_argument("Circuit::parse: unknown gate " + name);
}

Circuit Circuit::parse(const std::string& text, const std::string& id) {
    std::istringstream in(text);
    std::string line;
    Circuit circuit;
    bool have_header = false;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (!have_header) {
            std::uint32_t n = 0;
            if (head != "qubits:" || !(ls >> n) || n == 0)
                throw std::invalid_argument("Circuit::parse: expected 'qubits: n' header");
            circuit = Circuit(id, n);
            have_header = true;
            continue;
        }
        std::string op;
        if (!(ls >> op)) throw std::invalid_argument("Circuit::parse: missing operation");
        std::vector<std::uint32_t> targets;
        std::uint32_t t;
        while (ls >> t) targets.push_back(t);
        if (head == "single_qubit_gate") {
            if (targets.size() != 1) throw std::invalid_argument("Circuit::parse: bad target list");
            circuit.gate(parse_gate(op), targets[0]);
        } else if (head == "two_qubit_gate") {
            if (targets.size() != 2) throw std::invalid_argument("Circuit::parse: bad target list");
            circuit.gate(parse_gate(op), targets[0], targets[1]);
        } else if (head == "init" || head == "measurement") {
            if (targets.size() != 1) throw std::invalid_argument("Circuit::parse: bad target list");
            Basis b;
            if (op == "Z")
                b = Basis::Z;
            else if (op == "X")
                b = Basis::X;
            else
                throw std::invalid_argument("Circuit::parse: basis must be Z or X");
            if (head == "init")
                circuit.init(targets[0], b);
            else
                circuit.measure(targets[0], b);
        } else {
            throw std::invalid_argument("Circuit::parse: unknown location kind " + head);
        }
    }
    if (!have_header) throw std::invalid_argument("Circuit::parse: empty circuit text");
    return circuit;
}

}  // namespace dss
