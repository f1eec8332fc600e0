#pragma once

#include <array>
#include <string>
#include <vector>

#include "dss/circuit.hpp"
#include "dss/rng.hpp"

namespace dss {

// Per-shot fault weights, one entry per noise category.
using WeightVec = std::vector<std::uint32_t>;

inline std::uint32_t total_weight(const WeightVec& w) {
    std::uint32_t t = 0;
    for (auto v : w) t += v;
    return t;
}

struct NoiseCategory {
    std::string name;
    std::array<bool, kNumLocationKinds> kinds{};
    double rate = 0.0;  // the sampling rate; DSS samples at p_max and rescales
};

// Circuit-level depolarizing noise. Drawn faults follow App-style payloads:
// uniform over the 3 (15) nontrivial Paulis for single- (two-) qubit gates;
// init and measurement locations flip with probability 2/3 given a fault, so
// their marginal flip probability is 2p/3 while the per-location fault
// probability stays p for binomial counting.
struct NoiseParams {
    std::vector<NoiseCategory> categories;

    std::size_t num_categories() const { return categories.size(); }
    int category_of(LocationKind kind) const;
    // Throws unless the categories partition the four kinds exactly once and
    // every rate lies in [0,1].
    void validate() const;

    std::vector<double> rates() const;
    NoiseParams with_rates(const std::vector<double>& rates) const;
    NoiseParams scaled(double factor) const;

    // All four kinds in one category at rate p.
    static NoiseParams single_parameter(double p);
    // {single-qubit gate, init, measurement} at p1; {two-qubit gate} at p2.
    static NoiseParams two_parameter(double p1, double p2);
};

// Per-category location counts N_c^(k) under the partition.
std::vector<std::uint64_t> category_counts(const Circuit& circuit, const NoiseParams& noise);

// Uniformly draw w_k distinct faulty locations in each category and give each
// a payload from its nontrivial fault set.
FaultEvent draw_subset_fault(const Circuit& circuit, const NoiseParams& noise,
                             const WeightVec& weights, Rng& rng);

// Direct MC draw: every location faults independently at its category rate.
FaultEvent draw_mc_fault(const Circuit& circuit, const NoiseParams& noise, Rng& rng);

// Weight vector of an event under the partition.
WeightVec event_weights(const Circuit& circuit, const NoiseParams& noise, const FaultEvent& event);

}  // namespace dss
