#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dss/circuit.hpp"

namespace dss {

struct HistoryEntry {
    std::string circuit;
    MeasurementRecord record;
};
using History = std::vector<HistoryEntry>;

// Result of the transition function: either the next circuit to run or a
// terminal verdict. A failing terminal encodes the a-posteriori failure check.
struct Transition {
    bool terminal = false;
    bool fail = false;
    std::string next;

    static Transition to(std::string name) { return {false, false, std::move(name)}; }
    static Transition failure() { return {true, true, {}}; }
    static Transition success() { return {true, false, {}}; }
    bool operator==(const Transition&) const = default;
};

// Declarative model of a non-deterministic protocol: named circuits, a root,
// and a pure transition function over the full measurement history.
struct ProtocolGraph {
    std::string name;
    std::map<std::string, Circuit> circuits;
    std::string root;
    std::function<Transition(const History&)> transition;
    int ft_order = 0;          // t, in {0, 1}
    int max_ft_length = 1;     // L
    bool deterministic_root = false;

    std::uint32_t n_qubits() const;
    std::vector<std::string> circuit_names() const;
};

// Pure lookup of the next step; the last history entry must be the record of
// a completed circuit.
Transition next_node(const ProtocolGraph& protocol, const History& history);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> issues;
    std::string summary;
};

// Structural checks plus bounded probing of the transition function: the
// fault-free path must be unique and terminate, every successor must exist,
// and no probed (circuit, history) context may fan out to more than two
// distinct successors. Probing enumerates outcome patterns exhaustively up to
// a budget and is backed by the same assertion at sampling time.
ValidationReport validate(const ProtocolGraph& protocol, std::size_t probe_budget = 20000);

// Restricted declarative protocol format (see README): inline or file-based
// circuits plus transition rules on the just-finished circuit's bits.
ProtocolGraph parse_protocol_text(const std::string& text, const std::string& base_dir = ".");
ProtocolGraph load_protocol_file(const std::string& path);

}  // namespace dss
