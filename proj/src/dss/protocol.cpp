#include "dss/protocol.hpp"

#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dss {

std::uint32_t ProtocolGraph::n_qubits() const {
    std::uint32_t n = 0;
    for (const auto& [name_, circuit] : circuits) n = std::max(n, circuit.n_qubits());
    return n;
}

std::vector<std::string> ProtocolGraph::circuit_names() const {
    std::vector<std::string> names;
    names.reserve(circuits.size());
    for (const auto& [name_, circuit] : circuits) names.push_back(name_);
    return names;
}

Transition next_node(const ProtocolGraph& protocol, const History& history) {
    if (history.empty()) throw std::invalid_argument("next_node: empty history");
    if (!protocol.circuits.count(history.back().circuit))
        throw std::invalid_argument("next_node: history references unknown circuit");
    return protocol.transition(history);
}

ValidationReport validate(const ProtocolGraph& protocol, std::size_t probe_budget) {
    ValidationReport report;
    auto fail = [&report](std::string msg) {
        report.ok = false;
        report.issues.push_back(std::move(msg));
    };

    if (!protocol.circuits.count(protocol.root)) fail("root circuit '" + protocol.root + "' missing");
    if (protocol.max_ft_length < 1) fail("max FT length must be >= 1");
    if (protocol.ft_order != 0 && protocol.ft_order != 1) fail("ft order must be 0 or 1");
    if (!report.ok) return report;

    // Breadth-first probe over measurement outcome patterns. Histories are
    // expanded exhaustively until the budget runs out; distinct successors per
    // circuit are collected along the way.
    std::map<std::string, std::set<std::string>> successors;
    std::deque<History> frontier;
    frontier.push_back({{protocol.root, MeasurementRecord{}}});
    std::size_t probes = 0;
    const std::size_t depth_cap = 4 * static_cast<std::size_t>(protocol.max_ft_length) + 8;
    while (!frontier.empty() && probes < probe_budget) {
        History history = std::move(frontier.front());
        frontier.pop_front();
        const std::string current = history.back().circuit;
        const Circuit& circuit = protocol.circuits.at(current);
        const std::size_t bits = circuit.num_measurements();
        if (bits > 16) continue;  // pattern space too large; runtime assertion covers it
        std::vector<std::size_t> meas_locations;
        for (const auto& loc : circuit.locations())
            if (loc.kind == LocationKind::measurement) meas_locations.push_back(loc.index);
        for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << bits); ++pattern) {
            if (++probes > probe_budget) break;
            history.back().record.outcomes.clear();
            for (std::size_t b = 0; b < bits; ++b)
                history.back().record.outcomes.emplace_back(meas_locations[b],
                                                            static_cast<std::uint8_t>((pattern >> b) & 1));
            Transition t;
            try {
                t = protocol.transition(history);
            } catch (const std::exception& e) {
                fail("transition threw for circuit '" + current + "': " + e.what());
                continue;
            }
            if (t.terminal) {
                successors[current].insert(t.fail ? "<fail>" : "<no-fail>");
                continue;
            }
            if (!protocol.circuits.count(t.next)) {
                fail("transition from '" + current + "' targets unknown circuit '" + t.next + "'");
                continue;
            }
            successors[current].insert(t.next);
            if (history.size() < depth_cap) {
                History extended = history;
                extended.push_back({t.next, MeasurementRecord{}});
                frontier.push_back(std::move(extended));
            }
        }
    }
    for (const auto& [name, succ] : successors) {
        std::set<std::string> non_terminal;
        for (const auto& s : succ)
            if (s.front() != '<') non_terminal.insert(s);
        if (non_terminal.size() > 2)
            fail("circuit '" + name + "' reaches more than two distinct successors");
    }

    std::ostringstream out;
    out << "protocol " << protocol.name << ": " << protocol.circuits.size() << " circuits, t="
        << protocol.ft_order << ", L=" << protocol.max_ft_length << "\n";
    for (const auto& [name, circuit] : protocol.circuits) {
        const auto counts = circuit.category_counts();
        out << "  " << name << ": " << circuit.size() << " locations (1q=" << counts[0]
            << " 2q=" << counts[1] << " init=" << counts[2] << " meas=" << counts[3] << ")\n";
    }
    report.summary = out.str();
    return report;
}

// ---------------------------------------------------------------------------
// Declarative protocol files.

namespace {

struct Rule {
    bool is_else = false;
    std::size_t bit = 0;
    int value = 0;
    Transition action;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Transition parse_action(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    in >> word;
    if (word == "fail") return Transition::failure();
    if (word == "ok") return Transition::success();
    if (word == "next") {
        std::string target;
        if (!(in >> target)) throw std::invalid_argument("protocol rule: 'next' needs a circuit name");
        return Transition::to(target);
    }
    throw std::invalid_argument("protocol rule: unknown action '" + word + "'");
}

}  // namespace

ProtocolGraph parse_protocol_text(const std::string& text, const std::string& base_dir) {
    ProtocolGraph protocol;
    std::map<std::string, std::vector<Rule>> rules;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name:") {
            ls >> protocol.name;
        } else if (key == "root:") {
            ls >> protocol.root;
        } else if (key == "t:") {
            ls >> protocol.ft_order;
        } else if (key == "L:") {
            ls >> protocol.max_ft_length;
        } else if (key == "deterministic_root:") {
            std::string v;
            ls >> v;
            protocol.deterministic_root = v == "true" || v == "1";
        } else if (key == "circuit") {
            std::string cname, sep;
            ls >> cname >> sep;
            if (sep == "=") {
                std::string path;
                ls >> path;
                std::ifstream file(base_dir + "/" + path);
                if (!file) throw std::invalid_argument("protocol: cannot open circuit file " + path);
                std::stringstream buf;
                buf << file.rdbuf();
                protocol.circuits[cname] = Circuit::parse(buf.str(), cname);
            } else if (sep == "{") {
                std::string body, bline;
                while (std::getline(in, bline)) {
                    if (trim(bline) == "}") break;
                    body += bline + "\n";
                }
                protocol.circuits[cname] = Circuit::parse(body, cname);
            } else {
                throw std::invalid_argument("protocol: circuit needs '= path' or '{ ... }'");
            }
        } else if (key == "rule") {
            std::string cname;
            ls >> cname;
            if (!cname.empty() && cname.back() == ':') cname.pop_back();
            std::string rest;
            std::getline(ls, rest);
            const auto arrow = rest.find("->");
            if (arrow == std::string::npos) throw std::invalid_argument("protocol rule: missing '->'");
            const std::string cond = trim(rest.substr(0, arrow));
            Rule rule;
            rule.action = parse_action(trim(rest.substr(arrow + 2)));
            if (cond == "else") {
                rule.is_else = true;
            } else {
                std::istringstream cs(cond);
                std::string word, eq;
                cs >> word >> rule.bit >> eq >> rule.value;
                if (word != "bit" || eq != "==")
                    throw std::invalid_argument("protocol rule: condition must be 'bit i == v' or 'else'");
            }
            rules[cname].push_back(rule);
        } else {
            throw std::invalid_argument("protocol: unknown directive '" + key + "'");
        }
    }
    for (const auto& [cname, rlist] : rules) {
        if (!protocol.circuits.count(cname))
            throw std::invalid_argument("protocol: rules for unknown circuit " + cname);
        if (rlist.empty() || !rlist.back().is_else)
            throw std::invalid_argument("protocol: rules for " + cname + " must end with 'else'");
    }
    protocol.transition = [rules](const History& history) -> Transition {
        const auto& entry = history.back();
        auto it = rules.find(entry.circuit);
        if (it == rules.end()) return Transition::success();
        for (const Rule& rule : it->second) {
            if (rule.is_else) return rule.action;
            if (entry.record.bit(rule.bit) == rule.value) return rule.action;
        }
        return Transition::success();
    };
    if (protocol.name.empty() || protocol.root.empty())
        throw std::invalid_argument("protocol: 'name:' and 'root:' are required");
    return protocol;
}

ProtocolGraph load_protocol_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open protocol file " + path);
    std::stringstream buf;
    buf << file.rdbuf();
    const auto slash = path.find_last_of('/');
    return parse_protocol_text(buf.str(), slash == std::string::npos ? "." : path.substr(0, slash));
}

}  // namespace dss
