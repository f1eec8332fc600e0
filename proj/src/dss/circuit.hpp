#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dss/tableau.hpp"

namespace dss {

enum class LocationKind : std::uint8_t { single_qubit_gate, two_qubit_gate, init, measurement };
inline constexpr std::size_t kNumLocationKinds = 4;

const char* location_kind_name(LocationKind k);

// One fault location: a gate, an initialization, or a measurement at a fixed
// position in the circuit.
struct Location {
    std::size_t index = 0;
    LocationKind kind = LocationKind::single_qubit_gate;
    Gate gate = Gate::I;     // gates only
    Basis basis = Basis::Z;  // init/measurement only
    std::vector<std::uint32_t> targets;
};

// Fault applied after one ideal location. Gates take nontrivial Pauli codes
// (0..3 = I,X,Y,Z per target); init/measurement locations take a classical
// flip flag. A drawn init/measurement fault may still act trivially
// (flip = false); the location counts toward the subset weight regardless.
struct FaultPayload {
    std::array<std::uint8_t, 2> pauli{0, 0};
    bool flip = false;
};

struct FaultEvent {
    std::map<std::size_t, FaultPayload> entries;

    bool empty() const { return entries.empty(); }
    std::size_t total_weight() const { return entries.size(); }
};

// Ordered measurement outcomes of one circuit execution, keyed by location
// index and addressable by measurement ordinal.
struct MeasurementRecord {
    std::vector<std::pair<std::size_t, std::uint8_t>> outcomes;

    std::size_t size() const { return outcomes.size(); }
    int bit(std::size_t ordinal) const { return outcomes.at(ordinal).second; }
    bool operator==(const MeasurementRecord&) const = default;
};

class Circuit {
  public:
    Circuit() = default;
    Circuit(std::string id, std::uint32_t n_qubits) : id_(std::move(id)), n_qubits_(n_qubits) {}

    // Builder interface; locations are appended in program order.
    Circuit& gate(Gate g, std::uint32_t a);
    Circuit& gate(Gate g, std::uint32_t a, std::uint32_t b);
    Circuit& init(std::uint32_t q, Basis b = Basis::Z);
    Circuit& measure(std::uint32_t q, Basis b = Basis::Z);

    const std::string& id() const { return id_; }
    std::uint32_t n_qubits() const { return n_qubits_; }
    const std::vector<Location>& locations() const { return locations_; }
    std::size_t size() const { return locations_.size(); }
    std::size_t num_measurements() const { return num_measurements_; }

    // Exact per-kind location counts N_c^(k).
    std::array<std::uint64_t, kNumLocationKinds> category_counts() const;

    // Throws std::invalid_argument when the event references missing
    // locations or carries a payload inconsistent with the location kind.
    void check_fault(const FaultEvent& event) const;

    std::string serialize() const;
    static Circuit parse(const std::string& text, const std::string& id = "circuit");

  private:
    std::string id_;
    std::uint32_t n_qubits_ = 0;
    std::vector<Location> locations_;
    std::size_t num_measurements_ = 0;
};

// Execute the circuit: each location runs ideally and is then followed by its
// fault payload, if any. Measurement faults flip the recorded bit only; the
// post-measurement state keeps the true outcome's projection.
MeasurementRecord run_with_faults(StabilizerState& state, const Circuit& circuit,
                                  const FaultEvent& fault, const CoinSource& coin);
MeasurementRecord run_with_faults(StabilizerState& state, const Circuit& circuit,
                                  const FaultEvent& fault, Rng& rng);

}  // namespace dss
