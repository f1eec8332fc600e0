#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dss/noise.hpp"
#include "dss/protocol.hpp"
#include "dss/sample_tree.hpp"

namespace dss {

// Stop when either bound triggers; max_shots = 0 means unbounded (eta_max
// must then be positive), eta_max <= 0 disables the uncertainty target.
struct StopRule {
    std::uint64_t max_shots = 1000;
    double eta_max = 0.0;
};

enum class Criterion { binomial, eru };

struct DssOptions {
    Criterion criterion = Criterion::binomial;
    StopRule stop;
    std::uint64_t seed = 1;
    int workers = 1;
    bool prohibit_zero = false;
    bool record_eta_trace = false;
    std::size_t max_steps_per_shot = 1000;
};

struct DssResult {
    SampleTree tree;
    BoundsResult bounds;                                  // at the sampling rates
    std::vector<double> eta_trace;                        // eta after each shot, if recorded
    std::map<WeightVec, std::uint64_t> selection_counts;  // chosen subset weights
    std::vector<std::string> warnings;
};

// Dynamical subset sampling at the rates stored in `noise` (the p_max point).
// The binomial criterion draws shots independently, so with workers > 1 they
// run in an OpenMP batch and merge in shot order; the result is identical to
// the serial reference for any worker count. The ERU criterion is inherently
// sequential and ignores `workers` for the shot loop.
DssResult dss_run(const ProtocolGraph& protocol, const NoiseParams& noise,
                  const DssOptions& options);

struct McOptions {
    std::uint64_t shots = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool record_width_trace = false;
    std::size_t max_steps_per_shot = 1000;
};

struct McResult {
    std::uint64_t shots = 0;
    std::uint64_t failures = 0;
    double p_hat = 0.0;
    double err = 0.0;                 // Wilson half-width at z = 1
    std::vector<double> width_trace;  // full Wilson width after each shot
};

// Direct Monte Carlo baseline: every location of every executed circuit
// faults independently at its category rate.
McResult mc_run(const ProtocolGraph& protocol, const NoiseParams& noise, const McOptions& options);

// Draw a fault weight per category with probability A_w; optionally exclude
// the all-zero vector (renormalizing by rejection).
WeightVec choose_subset_binomial(const Circuit& circuit, const NoiseParams& noise,
                                 bool prohibit_zero, Rng& rng);

// Expected-reduction-of-uncertainty choice at the tree context `node` (the
// path-unique node of the circuit the in-flight shot is about to run).
// Candidates are the already-opened subsets plus the unopened frontier; ties
// break toward the lowest weight.
WeightVec choose_subset_eru(const SampleTree& tree, const CircuitNode* node,
                            const FactorFn& factors);

struct ExhaustiveOptions {
    std::uint64_t max_leaves = 10000000;
    std::size_t max_steps_per_shot = 1000;
};

struct ExhaustiveResult {
    double rate = 0.0;           // failure rate, uniform over fault placements
    double placements = 0.0;     // coin-weighted number of enumerated placements
    std::uint64_t leaves = 0;
    std::uint64_t failures = 0;  // leaves that ended in failure
    std::vector<std::string> failing_examples;
};

// Enumerate every fault configuration of exact per-category weight `weights`
// over the realized circuit sequences, expanding stochastic measurement
// outcomes exactly (each coin contributes probability 1/2 per branch).
// Payloads are weighted by their conditional draw probabilities. Throws when
// the leaf budget is exceeded.
ExhaustiveResult exhaustive_subset(const ProtocolGraph& protocol, const NoiseParams& noise,
                                   const WeightVec& weights,
                                   const ExhaustiveOptions& options = {});

struct AuditResult {
    bool fault_free_ok = false;
    std::uint64_t enumerated = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> failing_examples;
    bool passed() const { return fault_free_ok && failures == 0; }
};

// The FT-1 audit: the fault-free run must succeed and no single fault
// (every location, every payload, all measurement coins expanded) may cause
// a logical failure.
AuditResult audit_ft(const ProtocolGraph& protocol, const NoiseParams& noise,
                     const ExhaustiveOptions& options = {});

}  // namespace dss
