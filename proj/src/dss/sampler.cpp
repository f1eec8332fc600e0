#include "dss/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dss {

namespace {

using Chooser = std::function<WeightVec(const ShotTrace& so_far, const Circuit& circuit, Rng& rng)>;

ShotTrace run_one_shot(const ProtocolGraph& protocol, const NoiseParams& noise,
                       const Chooser& chooser, Rng& rng, std::size_t max_steps) {
    StabilizerState state(protocol.n_qubits());
    History history;
    ShotTrace trace;
    std::string current = protocol.root;
    for (std::size_t step = 0; step < max_steps; ++step) {
        const Circuit& circuit = protocol.circuits.at(current);
        WeightVec weights = chooser(trace, circuit, rng);
        FaultEvent fault = draw_subset_fault(circuit, noise, weights, rng);
        MeasurementRecord record = run_with_faults(state, circuit, fault, rng);
        history.push_back({current, record});
        const Transition t = protocol.transition(history);
        SuccessorKey key = t.terminal
                               ? (t.fail ? SuccessorKey::failure() : SuccessorKey::success())
                               : SuccessorKey::to(t.next);
        trace.steps.push_back({current, std::move(weights), std::move(record), std::move(key)});
        if (t.terminal) {
            trace.fail = t.fail;
            return trace;
        }
        current = t.next;
    }
    throw std::runtime_error("shot did not terminate within the step cap");
}

bool run_mc_shot(const ProtocolGraph& protocol, const NoiseParams& noise, Rng& rng,
                 std::size_t max_steps) {
    StabilizerState state(protocol.n_qubits());
    History history;
    std::string current = protocol.root;
    for (std::size_t step = 0; step < max_steps; ++step) {
        const Circuit& circuit = protocol.circuits.at(current);
        FaultEvent fault = draw_mc_fault(circuit, noise, rng);
        history.push_back({current, run_with_faults(state, circuit, fault, rng)});
        const Transition t = protocol.transition(history);
        if (t.terminal) return t.fail;
        current = t.next;
    }
    throw std::runtime_error("shot did not terminate within the step cap");
}

std::uint64_t draw_binomial_weight(std::uint64_t n, double p, Rng& rng) {
    if (n == 0 || p <= 0.0) return 0;
    const double r = uniform_unit(rng);
    double acc = 0.0;
    for (std::uint64_t w = 0; w < n; ++w) {
        acc += binomial_factor(n, w, p);
        if (r < acc) return w;
    }
    return n;
}

bool lex_less(const WeightVec& a, const WeightVec& b) {
    const auto ta = total_weight(a), tb = total_weight(b);
    if (ta != tb) return ta < tb;
    return a < b;
}

}  // namespace

WeightVec choose_subset_binomial(const Circuit& circuit, const NoiseParams& noise,
                                 bool prohibit_zero, Rng& rng) {
    const auto counts = category_counts(circuit, noise);
    bool can_be_nonzero = false;
    for (std::size_t k = 0; k < counts.size(); ++k)
        if (counts[k] > 0 && noise.categories[k].rate > 0.0) can_be_nonzero = true;
    WeightVec weights(counts.size(), 0);
    do {
        for (std::size_t k = 0; k < counts.size(); ++k)
            weights[k] =
                static_cast<std::uint32_t>(draw_binomial_weight(counts[k], noise.categories[k].rate, rng));
    } while (prohibit_zero && can_be_nonzero && total_weight(weights) == 0);
    return weights;
}

WeightVec choose_subset_eru(const SampleTree& tree, const CircuitNode* node,
                            const FactorFn& factors) {
    const std::size_t num_cats = tree.num_categories();
    const WeightVec zero(num_cats, 0);
    if (node == nullptr) return zero;  // unexplored context: open the smallest subset

    const auto& counts = tree.circuit_counts().at(node->circuit);
    std::set<WeightVec> candidates;
    if (node->subsets.empty()) candidates.insert(zero);
    for (const auto& [weights, subset] : node->subsets) {
        candidates.insert(weights);
        // the unopened frontier: one more fault in any category
        for (std::size_t k = 0; k < num_cats; ++k) {
            WeightVec up = weights;
            up[k]++;
            if (up[k] <= counts[k] && node->subsets.find(up) == node->subsets.end())
                candidates.insert(up);
        }
    }
    std::vector<WeightVec> order(candidates.begin(), candidates.end());
    std::sort(order.begin(), order.end(), lex_less);

    const double eta_now = evaluate(tree, factors).eta;
    std::vector<double> deltas(order.size(), 0.0);
#pragma omp parallel for schedule(dynamic) if (order.size() > 2)
    for (std::size_t i = 0; i < order.size(); ++i) {
        const WeightVec& weights = order[i];
        auto it = node->subsets.find(weights);
        if (it != node->subsets.end()) {
            const SubsetNode& subset = it->second;
            const std::uint64_t n = subset.visits;
            const std::uint64_t m = subset.successors.begin()->second.count;
            const double q = static_cast<double>(m) / static_cast<double>(n);
            EvalHypothesis plus{&subset, +1, nullptr, {}};
            EvalHypothesis minus{&subset, -1, nullptr, {}};
            deltas[i] = eta_now - (q * evaluate(tree, factors, &plus).eta +
                                   (1.0 - q) * evaluate(tree, factors, &minus).eta);
        } else {
            EvalHypothesis open{nullptr, 0, node, weights};
            deltas[i] = eta_now - evaluate(tree, factors, &open).eta;
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (deltas[i] > deltas[best]) best = i;
    return order[best];
}

DssResult dss_run(const ProtocolGraph& protocol, const NoiseParams& noise,
                  const DssOptions& options) {
    noise.validate();
    if (options.stop.max_shots == 0 && options.stop.eta_max <= 0.0)
        throw std::invalid_argument("dss_run: stop rule needs a finite bound");

    DssResult result{SampleTree::for_protocol(protocol, noise), {}, {}, {}, {}};
    SampleTree& tree = result.tree;
    const std::vector<double> rates = noise.rates();
    const FactorFn factors = binomial_factors(tree, rates);

    // Recommended operating regime: every subset smaller than the previous.
    for (const auto& [name, circuit] : protocol.circuits) {
        const auto counts = category_counts(circuit, noise);
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (counts[k] > 0 && rates[k] >= 1.0 / (static_cast<double>(counts[k]) + 1.0)) {
                std::ostringstream msg;
                msg << "rate " << rates[k] << " of category '" << noise.categories[k].name
                    << "' exceeds 1/(N_c+1) for circuit '" << name << "'";
                result.warnings.push_back(msg.str());
            }
        }
    }

    const bool need_eta = options.stop.eta_max > 0.0 || options.record_eta_trace;
    const WeightVec zero(noise.num_categories(), 0);
    std::uint64_t shot_index = 0;

    auto record = [&](const ShotTrace& trace) {
        for (const ShotStep& step : trace.steps) result.selection_counts[step.weights]++;
        tree.record_shot(trace);
        ++shot_index;
        if (need_eta) {
            const double eta = evaluate(tree, factors).eta;
            if (options.record_eta_trace) result.eta_trace.push_back(eta);
            if (options.stop.eta_max > 0.0 && eta <= options.stop.eta_max) return true;
        }
        return false;
    };
    auto reached_cap = [&]() {
        return options.stop.max_shots > 0 && shot_index >= options.stop.max_shots;
    };

    bool prohibit = options.prohibit_zero;
    if (prohibit && options.criterion == Criterion::eru) {
        result.warnings.push_back("weight-0 prohibition only applies to the binomial criterion");
        prohibit = false;
    }
    if (prohibit && !protocol.deterministic_root) {
        result.warnings.push_back(
            "weight-0 prohibition requires a deterministic fault-free root; ignored");
        prohibit = false;
    }

    bool stopped = false;
    if (prohibit && !reached_cap()) {
        // The fault-free outcome is deterministic, so one bootstrap shot pins
        // the weight-0 branch and all further shots skip it.
        Rng rng = make_stream(options.seed, shot_index);
        Chooser zero_chooser = [&zero](const ShotTrace&, const Circuit&, Rng&) { return zero; };
        ShotTrace trace =
            run_one_shot(protocol, noise, zero_chooser, rng, options.max_steps_per_shot);
        if (trace.fail)
            throw std::runtime_error("dss_run: fault-free run failed; protocol is inconsistent");
        stopped = record(trace);
    }

    if (options.criterion == Criterion::eru) {
        Chooser chooser = [&](const ShotTrace& so_far, const Circuit& circuit, Rng&) {
            const CircuitNode* ctx = tree.find_circuit(so_far.steps);
            return choose_subset_eru(tree, ctx, factors);
        };
        while (!stopped && !reached_cap()) {
            Rng rng = make_stream(options.seed, shot_index);
            stopped = record(run_one_shot(protocol, noise, chooser, rng, options.max_steps_per_shot));
        }
        result.bounds = evaluate(tree, factors);
        return result;
    }

    // Binomial criterion: shots are independent, so they are generated in
    // parallel batches and recorded in shot order. Results are identical to
    // the serial path for any worker count. The prohibition applies at the
    // root execution, whose fault-free branch the bootstrap shot pinned.
    Chooser sampling_chooser = [&](const ShotTrace& so_far, const Circuit& circuit, Rng& rng) {
        return choose_subset_binomial(circuit, noise, prohibit && so_far.steps.empty(), rng);
    };
    const int workers = std::max(1, options.workers);
    while (!stopped && !reached_cap()) {
        std::uint64_t batch = options.stop.max_shots > 0
                                  ? options.stop.max_shots - shot_index
                                  : static_cast<std::uint64_t>(workers) * 64;
        if (need_eta) batch = std::min<std::uint64_t>(batch, static_cast<std::uint64_t>(workers) * 16);
        batch = std::min<std::uint64_t>(batch, 8192);
        if (batch == 0) break;
        std::vector<ShotTrace> traces(batch);
        std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(workers) if (workers > 1)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(batch); ++i) {
            try {
                Rng rng = make_stream(options.seed, shot_index + static_cast<std::uint64_t>(i));
                traces[i] = run_one_shot(protocol, noise, sampling_chooser, rng,
                                         options.max_steps_per_shot);
            } catch (...) {
#pragma omp critical
                error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        for (ShotTrace& trace : traces) {
            stopped = record(trace);
            if (stopped || reached_cap()) break;
        }
    }
    result.bounds = evaluate(tree, factors);
    return result;
}

McResult mc_run(const ProtocolGraph& protocol, const NoiseParams& noise, const McOptions& options) {
    noise.validate();
    McResult result;
    result.shots = options.shots;
    const int workers = std::max(1, options.workers);
    std::uint64_t done = 0;
    while (done < options.shots) {
        const std::uint64_t batch = std::min<std::uint64_t>(options.shots - done, 8192);
        std::vector<std::uint8_t> fails(batch, 0);
        std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(workers) if (workers > 1)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(batch); ++i) {
            try {
                Rng rng = make_stream(options.seed, done + static_cast<std::uint64_t>(i));
                fails[i] = run_mc_shot(protocol, noise, rng, options.max_steps_per_shot) ? 1 : 0;
            } catch (...) {
#pragma omp critical
                error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        for (std::uint64_t i = 0; i < batch; ++i) {
            result.failures += fails[i];
            if (options.record_width_trace) {
                auto [lo, hi] = wilson_interval(result.failures, done + i + 1, 1.0);
                result.width_trace.push_back(hi - lo);
            }
        }
        done += batch;
    }
    result.p_hat = options.shots == 0
                       ? 0.0
                       : static_cast<double>(result.failures) / static_cast<double>(options.shots);
    result.err = options.shots == 0 ? 0.0 : wilson_halfwidth(result.failures, options.shots);
    return result;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration.

namespace {

struct PayloadOption {
    FaultPayload payload;
    double weight;
};

std::vector<PayloadOption> payload_options(LocationKind kind) {
    std::vector<PayloadOption> options;
    switch (kind) {
        case LocationKind::single_qubit_gate:
            for (int code = 1; code <= 3; ++code)
                options.push_back({FaultPayload{{static_cast<std::uint8_t>(code), 0}, false}, 1.0 / 3.0});
            break;
        case LocationKind::two_qubit_gate:
            for (int code = 1; code <= 15; ++code)
                options.push_back({FaultPayload{{static_cast<std::uint8_t>(code >> 2),
                                                 static_cast<std::uint8_t>(code & 3)},
                                                false},
                                   1.0 / 15.0});
            break;
        case LocationKind::init:
        case LocationKind::measurement:
            options.push_back({FaultPayload{{0, 0}, true}, 2.0 / 3.0});
            options.push_back({FaultPayload{{0, 0}, false}, 1.0 / 3.0});
            break;
    }
    return options;
}

std::string payload_desc(const Location& loc, const FaultPayload& payload) {
    static const char* names = "IXYZ";
    std::ostringstream out;
    out << location_kind_name(loc.kind) << "@" << loc.index;
    if (loc.kind == LocationKind::single_qubit_gate || loc.kind == LocationKind::two_qubit_gate) {
        out << ":";
        for (std::size_t i = 0; i < loc.targets.size(); ++i) out << names[payload.pauli[i]];
    } else {
        out << (payload.flip ? ":flip" : ":noop");
    }
    return out.str();
}

class Enumerator {
  public:
    Enumerator(const ProtocolGraph& protocol, const NoiseParams& noise,
               const ExhaustiveOptions& options)
        : protocol_(protocol), noise_(noise), options_(options) {}

    void run(const WeightVec& weights) {
        StabilizerState state(protocol_.n_qubits());
        History history;
        at_circuit(state, history, protocol_.root, weights, 1.0, "");
    }

    double fail_mass = 0.0;
    double total_mass = 0.0;
    std::uint64_t leaves = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> failing;

  private:
    void at_circuit(const StabilizerState& state, History& history, const std::string& name,
                    const WeightVec& remaining, double mass, const std::string& desc) {
        if (history.size() >= options_.max_steps_per_shot)
            throw std::runtime_error("exhaustive_subset: sequence exceeded the step cap");
        const Circuit& circuit = protocol_.circuits.at(name);
        std::vector<std::vector<std::size_t>> members(noise_.num_categories());
        for (const Location& loc : circuit.locations())
            members[noise_.category_of(loc.kind)].push_back(loc.index);

        std::vector<std::size_t> chosen;
        choose_category(state, history, circuit, members, remaining, 0, chosen, mass, desc);
    }

    // Pick u_k <= remaining_k locations in category k, for every k; every
    // subset size is enumerated because later circuits may host the rest.
    void choose_category(const StabilizerState& state, History& history, const Circuit& circuit,
                         const std::vector<std::vector<std::size_t>>& members,
                         const WeightVec& remaining, std::size_t category,
                         std::vector<std::size_t>& chosen, double mass, const std::string& desc) {
        if (category == members.size()) {
            WeightVec used = event_weights_of(circuit, chosen);
            WeightVec rest(remaining.size());
            for (std::size_t k = 0; k < remaining.size(); ++k) rest[k] = remaining[k] - used[k];
            FaultEvent event;
            assign_payloads(state, history, circuit, chosen, 0, event, rest, mass, desc);
            return;
        }
        const std::uint32_t max_here = std::min<std::uint32_t>(
            remaining[category], static_cast<std::uint32_t>(members[category].size()));
        for (std::uint32_t take = 0; take <= max_here; ++take)
            choose_combination(state, history, circuit, members, remaining, category, take, 0, chosen,
                               mass, desc);
    }

    void choose_combination(const StabilizerState& state, History& history, const Circuit& circuit,
                            const std::vector<std::vector<std::size_t>>& members,
                            const WeightVec& remaining, std::size_t category, std::uint32_t need,
                            std::size_t start, std::vector<std::size_t>& chosen, double mass,
                            const std::string& desc) {
        if (need == 0) {
            choose_category(state, history, circuit, members, remaining, category + 1, chosen, mass,
                            desc);
            return;
        }
        const auto& pool = members[category];
        for (std::size_t i = start; i + need <= pool.size(); ++i) {
            chosen.push_back(pool[i]);
            choose_combination(state, history, circuit, members, remaining, category, need - 1, i + 1,
                               chosen, mass, desc);
            chosen.pop_back();
        }
    }

    WeightVec event_weights_of(const Circuit& circuit, const std::vector<std::size_t>& chosen) const {
        WeightVec weights(noise_.num_categories(), 0);
        for (std::size_t index : chosen)
            weights[noise_.category_of(circuit.locations()[index].kind)]++;
        return weights;
    }

    void assign_payloads(const StabilizerState& state, History& history, const Circuit& circuit,
                         const std::vector<std::size_t>& chosen, std::size_t position,
                         FaultEvent& event, const WeightVec& rest, double mass,
                         const std::string& desc) {
        if (position == chosen.size()) {
            run_branches(state, history, circuit, event, rest, mass, desc, {});
            return;
        }
        const Location& loc = circuit.locations()[chosen[position]];
        for (const PayloadOption& option : payload_options(loc.kind)) {
            event.entries[loc.index] = option.payload;
            std::string next_desc = desc.empty() ? "" : desc + " ";
            next_desc += circuit.id() + "/" + payload_desc(loc, option.payload);
            assign_payloads(state, history, circuit, chosen, position + 1, event,
                            rest, mass * option.weight, next_desc);
        }
        event.entries.erase(loc.index);
    }

    // Expand stochastic measurement outcomes exactly. The coin demand of a
    // circuit run is fixed by its unsigned tableau evolution, so replaying
    // with a one-bit-longer tape is sound.
    void run_branches(const StabilizerState& state, History& history, const Circuit& circuit,
                      const FaultEvent& event, const WeightVec& rest, double mass,
                      const std::string& desc, std::vector<std::uint8_t> tape) {
        std::size_t pos = 0;
        bool overflow = false;
        CoinSource coins = [&]() -> int {
            if (pos < tape.size()) return tape[pos++];
            overflow = true;
            return 0;
        };
        StabilizerState work = state;
        MeasurementRecord record = run_with_faults(work, circuit, event, coins);
        if (overflow) {
            tape.push_back(0);
            run_branches(state, history, circuit, event, rest, mass, desc, tape);
            tape.back() = 1;
            run_branches(state, history, circuit, event, rest, mass, desc, std::move(tape));
            return;
        }
        const double branch_mass = mass * std::pow(0.5, static_cast<double>(tape.size()));
        history.push_back({circuit.id(), std::move(record)});
        const Transition t = protocol_.transition(history);
        if (t.terminal) {
            if (++leaves > options_.max_leaves)
                throw std::runtime_error("exhaustive_subset: leaf budget exceeded");
            if (total_weight(rest) == 0) {
                total_mass += branch_mass;
                if (t.fail) {
                    fail_mass += branch_mass;
                    ++failures;
                    if (failing.size() < 8) failing.push_back(desc.empty() ? "(fault-free)" : desc);
                }
            }
        } else {
            at_circuit(work, history, t.next, rest, branch_mass, desc);
        }
        history.pop_back();
    }

    const ProtocolGraph& protocol_;
    const NoiseParams& noise_;
    ExhaustiveOptions options_;
};

}  // namespace

ExhaustiveResult exhaustive_subset(const ProtocolGraph& protocol, const NoiseParams& noise,
                                   const WeightVec& weights, const ExhaustiveOptions& options) {
    noise.validate();
    if (weights.size() != noise.num_categories())
        throw std::invalid_argument("exhaustive_subset: weight vector length mismatch");
    Enumerator enumerator(protocol, noise, options);
    enumerator.run(weights);
    ExhaustiveResult result;
    result.placements = enumerator.total_mass;
    result.leaves = enumerator.leaves;
    result.failures = enumerator.failures;
    result.failing_examples = std::move(enumerator.failing);
    result.rate = enumerator.total_mass == 0.0 ? 0.0 : enumerator.fail_mass / enumerator.total_mass;
    return result;
}

AuditResult audit_ft(const ProtocolGraph& protocol, const NoiseParams& noise,
                     const ExhaustiveOptions& options) {
    AuditResult result;
    const WeightVec zero(noise.num_categories(), 0);
    const ExhaustiveResult fault_free = exhaustive_subset(protocol, noise, zero, options);
    result.fault_free_ok = fault_free.failures == 0;
    for (std::size_t k = 0; k < noise.num_categories(); ++k) {
        WeightVec unit = zero;
        unit[k] = 1;
        const ExhaustiveResult res = exhaustive_subset(protocol, noise, unit, options);
        result.enumerated += res.leaves;
        result.failures += res.failures;
        for (const auto& example : res.failing_examples)
            if (result.failing_examples.size() < 8) result.failing_examples.push_back(example);
    }
    return result;
}

}  // namespace dss
