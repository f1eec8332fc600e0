#include "dss/noise.hpp"

#include <algorithm>
#include <stdexcept>

namespace dss {

int NoiseParams::category_of(LocationKind kind) const {
    for (std::size_t k = 0; k < categories.size(); ++k)
        if (categories[k].kinds[static_cast<std::size_t>(kind)]) return static_cast<int>(k);
    return -1;
}

void NoiseParams::validate() const {
    if (categories.empty()) throw std::invalid_argument("NoiseParams: need at least one category");
    for (std::size_t kind = 0; kind < kNumLocationKinds; ++kind) {
        int owners = 0;
        for (const auto& cat : categories) owners += cat.kinds[kind] ? 1 : 0;
        if (owners != 1)
            throw std::invalid_argument("NoiseParams: kinds must be partitioned exactly once");
    }
    for (const auto& cat : categories)
        if (cat.rate < 0.0 || cat.rate > 1.0)
            throw std::invalid_argument("NoiseParams: rate outside [0,1]");
}

std::vector<double> NoiseParams::rates() const {
    std::vector<double> r;
    r.reserve(categories.size());
    for (const auto& cat : categories) r.push_back(cat.rate);
    return r;
}

NoiseParams NoiseParams::with_rates(const std::vector<double>& rates) const {
    if (rates.size() != categories.size())
        throw std::invalid_argument("NoiseParams::with_rates: length mismatch");
    NoiseParams out = *this;
    for (std::size_t k = 0; k < rates.size(); ++k) out.categories[k].rate = rates[k];
    return out;
}

NoiseParams NoiseParams::scaled(double factor) const {
    NoiseParams out = *this;
    for (auto& cat : out.categories) cat.rate *= factor;
    return out;
}

NoiseParams NoiseParams::single_parameter(double p) {
    NoiseParams noise;
    NoiseCategory all;
    all.name = "all";
    all.kinds.fill(true);
    all.rate = p;
    noise.categories.push_back(all);
    return noise;
}

NoiseParams NoiseParams::two_parameter(double p1, double p2) {
    NoiseParams noise;
    NoiseCategory one, two;
    one.name = "p1";
    one.kinds[static_cast<std::size_t>(LocationKind::single_qubit_gate)] = true;
    one.kinds[static_cast<std::size_t>(LocationKind::init)] = true;
    one.kinds[static_cast<std::size_t>(LocationKind::measurement)] = true;
    one.rate = p1;
    two.name = "p2";
    two.kinds[static_cast<std::size_t>(LocationKind::two_qubit_gate)] = true;
    two.rate = p2;
    noise.categories = {one, two};
    return noise;
}

std::vector<std::uint64_t> category_counts(const Circuit& circuit, const NoiseParams& noise) {
    std::vector<std::uint64_t> counts(noise.num_categories(), 0);
    for (const Location& loc : circuit.locations()) counts[noise.category_of(loc.kind)]++;
    return counts;
}

static FaultPayload draw_payload(LocationKind kind, Rng& rng) {
    FaultPayload payload;
    switch (kind) {
        case LocationKind::single_qubit_gate:
            payload.pauli[0] = static_cast<std::uint8_t>(1 + uniform_below(rng, 3));
            break;
        case LocationKind::two_qubit_gate: {
            const auto code = 1 + uniform_below(rng, 15);  // {I,X,Y,Z}^2 minus I(x)I
            payload.pauli[0] = static_cast<std::uint8_t>(code >> 2);
            payload.pauli[1] = static_cast<std::uint8_t>(code & 3);
            break;
        }
        case LocationKind::init:
        case LocationKind::measurement:
            payload.flip = bernoulli(rng, 2.0 / 3.0);
            break;
    }
    return payload;
}

FaultEvent draw_subset_fault(const Circuit& circuit, const NoiseParams& noise,
                             const WeightVec& weights, Rng& rng) {
    if (weights.size() != noise.num_categories())
        throw std::invalid_argument("draw_subset_fault: weight vector length mismatch");
    std::vector<std::vector<std::size_t>> members(noise.num_categories());
    for (const Location& loc : circuit.locations())
        members[noise.category_of(loc.kind)].push_back(loc.index);

    FaultEvent event;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        auto& pool = members[k];
        if (weights[k] > pool.size())
            throw std::invalid_argument("draw_subset_fault: weight exceeds category size");
        // Partial Fisher-Yates: the first w_k entries end up a uniform sample
        // without replacement.
        for (std::uint32_t i = 0; i < weights[k]; ++i) {
            const std::size_t j = i + uniform_below(rng, pool.size() - i);
            std::swap(pool[i], pool[j]);
            const std::size_t loc_index = pool[i];
            event.entries[loc_index] = draw_payload(circuit.locations()[loc_index].kind, rng);
        }
    }
    return event;
}

FaultEvent draw_mc_fault(const Circuit& circuit, const NoiseParams& noise, Rng& rng) {
    FaultEvent event;
    for (const Location& loc : circuit.locations()) {
        const double rate = noise.categories[noise.category_of(loc.kind)].rate;
        if (rate > 0.0 && bernoulli(rng, rate)) event.entries[loc.index] = draw_payload(loc.kind, rng);
    }
    return event;
}

WeightVec event_weights(const Circuit& circuit, const NoiseParams& noise, const FaultEvent& event) {
    WeightVec weights(noise.num_categories(), 0);
    for (const auto& [index, payload] : event.entries)
        weights[noise.category_of(circuit.locations()[index].kind)]++;
    return weights;
}

}  // namespace dss
