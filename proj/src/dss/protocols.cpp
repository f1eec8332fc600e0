#include "dss/protocols.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace dss {

PauliOperator SteaneCode::generator(char type, int k, std::size_t n) {
    PauliOperator p(n);
    for (std::uint8_t q : plaquettes[k]) p.set_pauli(q, type == 'X' ? 1 : 3);
    return p;
}

PauliOperator SteaneCode::logical_z(std::size_t n) {
    PauliOperator p(n);
    for (std::uint32_t q = 0; q < 7; ++q) p.set_pauli(q, 3);
    return p;
}

std::optional<std::uint32_t> SteaneCode::lookup(const std::array<int, 3>& syndrome) {
    const int label = 4 * syndrome[0] + syndrome[1] + 2 * syndrome[2];  // 1-based qubit label
    if (label == 0) return std::nullopt;
    return static_cast<std::uint32_t>(label - 1);
}

std::array<int, 3> SteaneCode::x_error_syndrome(std::uint8_t error_mask) {
    std::array<int, 3> syndrome{};
    for (int k = 0; k < 3; ++k) {
        std::uint8_t overlap = 0;
        for (std::uint8_t q : plaquettes[k]) overlap ^= (error_mask >> q) & 1;
        syndrome[k] = overlap;
    }
    return syndrome;
}

int SteaneCode::min_hamming_distance(std::uint8_t bits) {
    int best = 7;
    for (std::uint8_t word : codewords)
        best = std::min(best, std::popcount(static_cast<unsigned>(bits ^ word)));
    return best;
}

// ---------------------------------------------------------------------------
// Pauli-frame propagation (used to enumerate flag error sets).

namespace {

struct Frame {
    std::vector<std::uint8_t> x, z;
    std::map<std::size_t, int> measurement_flips;  // location index -> record flipped

    explicit Frame(std::size_t n) : x(n, 0), z(n, 0) {}
};

// Propagate the frame through the locations after `start` (exclusive).
void propagate(Frame& frame, const Circuit& circuit, std::size_t start) {
    for (std::size_t i = start + 1; i < circuit.size(); ++i) {
        const Location& loc = circuit.locations()[i];
        switch (loc.kind) {
            case LocationKind::single_qubit_gate: {
                const auto t = loc.targets[0];
                if (loc.gate == Gate::H) std::swap(frame.x[t], frame.z[t]);
                if (loc.gate == Gate::S) frame.z[t] ^= frame.x[t];
                break;  // Pauli gates commute with the frame
            }
            case LocationKind::two_qubit_gate: {
                const auto c = loc.targets[0], t = loc.targets[1];
                frame.x[t] ^= frame.x[c];
                frame.z[c] ^= frame.z[t];
                break;
            }
            case LocationKind::init:
                frame.x[loc.targets[0]] = 0;
                frame.z[loc.targets[0]] = 0;
                break;
            case LocationKind::measurement: {
                const auto t = loc.targets[0];
                const int flip = loc.basis == Basis::Z ? frame.x[t] : frame.z[t];
                if (flip) frame.measurement_flips[i] ^= 1;
                break;
            }
        }
    }
}

}  // namespace

FlagErrorSet flag_error_set(const Circuit& circuit, std::uint32_t flag_qubit) {
    std::size_t flag_location = circuit.size();
    for (const Location& loc : circuit.locations())
        if (loc.kind == LocationKind::measurement && loc.targets[0] == flag_qubit)
            flag_location = loc.index;
    if (flag_location == circuit.size())
        throw std::invalid_argument("flag_error_set: no measurement on the flag qubit");

    FlagErrorSet set;
    std::map<std::uint8_t, std::uint8_t> seen_masks;
    for (const Location& loc : circuit.locations()) {
        // Enumerate the nontrivial fault payloads of this location.
        std::vector<Frame> frames;
        switch (loc.kind) {
            case LocationKind::single_qubit_gate:
                for (int code = 1; code <= 3; ++code) {
                    Frame f(circuit.n_qubits());
                    f.x[loc.targets[0]] = code == 1 || code == 2;
                    f.z[loc.targets[0]] = code == 2 || code == 3;
                    frames.push_back(std::move(f));
                }
                break;
            case LocationKind::two_qubit_gate:
                for (int code = 1; code <= 15; ++code) {
                    Frame f(circuit.n_qubits());
                    for (int leg = 0; leg < 2; ++leg) {
                        const int p = leg == 0 ? code >> 2 : code & 3;
                        f.x[loc.targets[leg]] = p == 1 || p == 2;
                        f.z[loc.targets[leg]] = p == 2 || p == 3;
                    }
                    frames.push_back(std::move(f));
                }
                break;
            case LocationKind::init: {
                Frame f(circuit.n_qubits());
                if (loc.basis == Basis::Z)
                    f.x[loc.targets[0]] = 1;
                else
                    f.z[loc.targets[0]] = 1;
                frames.push_back(std::move(f));
                break;
            }
            case LocationKind::measurement: {
                Frame f(circuit.n_qubits());
                f.measurement_flips[loc.index] ^= 1;
                frames.push_back(std::move(f));
                break;
            }
        }
        for (Frame& frame : frames) {
            propagate(frame, circuit, loc.index);
            auto it = frame.measurement_flips.find(flag_location);
            if (it == frame.measurement_flips.end() || it->second == 0) continue;
            std::uint8_t mask = 0;
            for (std::uint32_t q = 0; q < 7; ++q)
                if (frame.x[q]) mask |= static_cast<std::uint8_t>(1u << q);
            seen_masks.emplace(mask, mask);
        }
    }
    for (const auto& [mask, unused] : seen_masks) {
        FlagErrorSet::Member member{mask, SteaneCode::x_error_syndrome(mask)};
        const std::uint8_t key = FlagErrorSet::pack(member.syndrome);
        auto it = set.by_syndrome.find(key);
        if (it == set.by_syndrome.end() ||
            std::popcount(static_cast<unsigned>(mask)) <
                std::popcount(static_cast<unsigned>(it->second)))
            set.by_syndrome[key] = mask;
        set.members.push_back(member);
    }
    return set;
}

// ---------------------------------------------------------------------------
// Builtin protocols.

ProtocolGraph ghz_protocol() {
    Circuit c("GHZ", 5);
    for (std::uint32_t q = 0; q < 5; ++q) c.init(q);
    c.gate(Gate::H, 0);
    c.gate(Gate::CNOT, 0, 1);
    c.gate(Gate::CNOT, 1, 2);
    c.gate(Gate::CNOT, 2, 3);
    // Flag verification: the two CNOTs copy the Z1Z4 parity onto the flag.
    c.gate(Gate::CNOT, 0, 4);
    c.gate(Gate::CNOT, 3, 4);
    c.measure(4);

    ProtocolGraph protocol;
    protocol.name = "ghz";
    protocol.circuits.emplace("GHZ", std::move(c));
    protocol.root = "GHZ";
    protocol.ft_order = 0;  // the flag event itself is first order in p
    protocol.max_ft_length = 1;
    protocol.deterministic_root = true;
    protocol.transition = [](const History& history) {
        return history.back().record.bit(0) ? Transition::failure() : Transition::success();
    };
    return protocol;
}

namespace {

std::uint8_t record_to_mask(const MeasurementRecord& record) {
    std::uint8_t bits = 0;
    for (std::size_t i = 0; i < 7; ++i)
        bits |= static_cast<std::uint8_t>(record.bit(i) << i);
    return bits;
}

}  // namespace

ProtocolGraph steane_det_prep() {
    // Data qubits 0..6, auxiliary qubit 7.
    Circuit enc("ENC", 8);
    for (std::uint32_t q = 0; q < 7; ++q) enc.init(q);
    for (std::uint32_t q : {0u, 1u, 3u}) enc.gate(Gate::H, q);
    // Encoder schedule; chosen so every single fault is caught by the
    // flagged verification or stays equivalent to weight one (audited).
    const std::pair<std::uint32_t, std::uint32_t> cnots[] = {
        {0, 2}, {1, 2}, {2, 6}, {3, 6}, {0, 4}, {3, 4}, {1, 5}, {3, 5}};
    for (auto [a, b] : cnots) enc.gate(Gate::CNOT, a, b);
    // Flagged verification of Z3Z5Z6 (data qubits 2, 4, 5).
    enc.init(7);
    for (std::uint32_t q : {2u, 4u, 5u}) enc.gate(Gate::CNOT, q, 7);
    enc.measure(7);

    Circuit sz("SZ", 8);
    sz.init(7);
    for (std::uint32_t q : {0u, 1u, 3u, 6u}) sz.gate(Gate::CNOT, q, 7);  // Z1Z2Z4Z7
    sz.measure(7);

    Circuit x7("X7", 8);
    x7.gate(Gate::X, 6);

    Circuit meas("MEAS", 8);
    for (std::uint32_t q = 0; q < 7; ++q) meas.measure(q);

    ProtocolGraph protocol;
    protocol.name = "steane-det-0";
    protocol.circuits.emplace("ENC", std::move(enc));
    protocol.circuits.emplace("SZ", std::move(sz));
    protocol.circuits.emplace("X7", std::move(x7));
    protocol.circuits.emplace("MEAS", std::move(meas));
    protocol.root = "ENC";
    protocol.ft_order = 1;
    protocol.max_ft_length = 4;
    protocol.deterministic_root = true;
    protocol.transition = [](const History& history) -> Transition {
        const HistoryEntry& entry = history.back();
        if (entry.circuit == "ENC")
            return entry.record.bit(0) ? Transition::to("SZ") : Transition::to("MEAS");
        if (entry.circuit == "SZ")
            return entry.record.bit(0) ? Transition::to("X7") : Transition::to("MEAS");
        if (entry.circuit == "X7") return Transition::to("MEAS");
        const int distance = SteaneCode::min_hamming_distance(record_to_mask(entry.record));
        return distance > 1 ? Transition::failure() : Transition::success();
    };
    return protocol;
}

namespace {

// Flagged readout of X-plaquette k: syndrome ancilla 7 in |+>, flag qubit 8
// in |0>; the two flag couplings wrap the middle data CNOTs, so any ancilla
// X fault that spreads to two data qubits also flips the flag.
Circuit flag_readout_circuit(const std::string& name, int k, bool with_data_init) {
    Circuit c(name, 9);
    if (with_data_init)
        for (std::uint32_t q = 0; q < 7; ++q) c.init(q);
    c.init(7, Basis::X);
    c.init(8, Basis::Z);
    const auto& d = SteaneCode::plaquettes[k];
    c.gate(Gate::CNOT, 7, d[0]);
    c.gate(Gate::CNOT, 7, 8);
    c.gate(Gate::CNOT, 7, d[1]);
    c.gate(Gate::CNOT, 7, d[2]);
    c.gate(Gate::CNOT, 7, 8);
    c.gate(Gate::CNOT, 7, d[3]);
    c.measure(7, Basis::X);  // bit 0: syndrome
    c.measure(8, Basis::Z);  // bit 1: flag
    return c;
}

Circuit nfs_circuit() {
    Circuit c("NFS", 9);
    for (int k = 0; k < 3; ++k) {  // bits 0..2: X-stabilizer syndromes
        c.init(7, Basis::X);
        for (std::uint8_t q : SteaneCode::plaquettes[k]) c.gate(Gate::CNOT, 7, q);
        c.measure(7, Basis::X);
    }
    for (int k = 0; k < 3; ++k) {  // bits 3..5: Z-stabilizer syndromes
        c.init(7, Basis::Z);
        for (std::uint8_t q : SteaneCode::plaquettes[k]) c.gate(Gate::CNOT, q, 7);
        c.measure(7, Basis::Z);
    }
    return c;
}

struct SxName {
    int k = -1;        // plaquette 0..2
    char round = 'a';
};

std::optional<SxName> parse_sx(const std::string& name) {
    if (name.size() != 4 || name[0] != 'S' || name[1] != 'X') return std::nullopt;
    return SxName{name[2] - '1', name[3]};
}

std::string sx_name(int k, char round) { return std::string("SX") + char('1' + k) + round; }

}  // namespace

ProtocolGraph steane_flag_prep() {
    ProtocolGraph protocol;
    protocol.name = "steane-flag-0";
    const char* names[2][3] = {{"SX1a", "SX2a", "SX3a"}, {"SX1b", "SX2b", "SX3b"}};
    std::array<FlagErrorSet, 3> flag_sets;
    for (int round = 0; round < 2; ++round)
        for (int k = 0; k < 3; ++k) {
            Circuit c = flag_readout_circuit(names[round][k], k, round == 0 && k == 0);
            if (round == 0) flag_sets[k] = flag_error_set(c, 8);
            protocol.circuits.emplace(names[round][k], std::move(c));
        }
    protocol.circuits.emplace("NFS", nfs_circuit());
    Circuit meas("MEAS", 9);
    for (std::uint32_t q = 0; q < 7; ++q) meas.measure(q);
    protocol.circuits.emplace("MEAS", std::move(meas));
    protocol.root = "SX1a";
    protocol.ft_order = 1;
    protocol.max_ft_length = 8;  // 6 flag readouts + syndrome readout + measurement
    protocol.deterministic_root = false;

    protocol.transition = [flag_sets](const History& history) -> Transition {
        const HistoryEntry& entry = history.back();
        if (auto sx = parse_sx(entry.circuit)) {
            if (entry.record.bit(1)) return Transition::to("NFS");  // case 3: flag triggered
            if (sx->round == 'b') {
                // Case 2: consecutive flagged readouts of the same stabilizer disagree.
                const std::string partner = std::string("SX") + char('1' + sx->k) + 'a';
                for (const HistoryEntry& past : history)
                    if (past.circuit == partner && past.record.bit(0) != entry.record.bit(0))
                        return Transition::to("NFS");
                if (sx->k == 2) return Transition::to("MEAS");  // case 1: both rounds agree
                return Transition::to(sx_name(sx->k + 1, 'b'));
            }
            if (sx->k == 2) return Transition::to("SX1b");
            return Transition::to(sx_name(sx->k + 1, 'a'));
        }
        if (entry.circuit == "NFS") return Transition::to("MEAS");

        // MEAS: apply the classical X corrections, then decode.
        std::uint8_t correction = 0;
        const HistoryEntry* nfs = nullptr;
        int flagged_k = -1;
        for (const HistoryEntry& past : history) {
            if (past.circuit == "NFS") nfs = &past;
            if (auto sx = parse_sx(past.circuit); sx && past.record.bit(1)) flagged_k = sx->k;
        }
        if (nfs != nullptr) {
            const std::array<int, 3> z_syndrome{nfs->record.bit(3), nfs->record.bit(4),
                                                nfs->record.bit(5)};
            bool matched = false;
            if (flagged_k >= 0) {
                // Case 3(a): a single flagged fault explains the syndrome;
                // apply its error a second time.
                const auto& set = flag_sets[flagged_k];
                auto it = set.by_syndrome.find(FlagErrorSet::pack(z_syndrome));
                if (it != set.by_syndrome.end()) {
                    correction = it->second;
                    matched = true;
                }
            }
            if (!matched) {
                // Case 2 / 3(b): lookup correction from the third-round
                // syndrome. The Z-type correction from the X syndromes is
                // tracked only; it commutes with the destructive measurement.
                if (auto q = SteaneCode::lookup(z_syndrome))
                    correction = static_cast<std::uint8_t>(1u << *q);
            }
        }
        const std::uint8_t bits = record_to_mask(entry.record) ^ correction;
        return SteaneCode::min_hamming_distance(bits) > 1 ? Transition::failure()
                                                          : Transition::success();
    };
    return protocol;
}

const std::map<std::string, ProtocolGraph (*)()>& builtin_protocols() {
    static const std::map<std::string, ProtocolGraph (*)()> registry = {
        {"ghz", &ghz_protocol},
        {"steane-det-0", &steane_det_prep},
        {"steane-flag-0", &steane_flag_prep},
    };
    return registry;
}

ProtocolGraph make_protocol(const std::string& name_or_path) {
    const auto& registry = builtin_protocols();
    auto it = registry.find(name_or_path);
    if (it != registry.end()) return it->second();
    return load_protocol_file(name_or_path);
}

}  // namespace dss
