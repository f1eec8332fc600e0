#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dss/noise.hpp"
#include "dss/protocol.hpp"
#include "dss/stats.hpp"

namespace dss {

// Successor of a subset node: the next circuit, or a terminal verdict.
// Ordering fixes the canonical child layout (circuits, then fail, then
// no-fail) so that merged trees and dumps are order-independent.
struct SuccessorKey {
    enum class Kind : std::uint8_t { circuit = 0, fail = 1, nofail = 2 };
    Kind kind = Kind::nofail;
    std::string circuit;

    static SuccessorKey to(std::string name) { return {Kind::circuit, std::move(name)}; }
    static SuccessorKey failure() { return {Kind::fail, {}}; }
    static SuccessorKey success() { return {Kind::nofail, {}}; }
    auto operator<=>(const SuccessorKey&) const = default;
};

struct CircuitNode;

struct Successor {
    std::uint64_t count = 0;
    std::unique_ptr<CircuitNode> node;  // circuit successors only
};

// Bernoulli branching context: which successor follows this (circuit, w)
// stage, estimated from visit counts.
struct SubsetNode {
    std::uint64_t visits = 0;
    std::map<SuccessorKey, Successor> successors;
};

struct CircuitNode {
    std::string circuit;
    std::map<WeightVec, SubsetNode> subsets;
};

// One step of a sampled protocol instance.
struct ShotStep {
    std::string circuit;
    WeightVec weights;
    MeasurementRecord record;
    SuccessorKey successor;
};

struct ShotTrace {
    std::vector<ShotStep> steps;
    bool fail = false;
};

struct BoundsResult {
    double p_l = 0.0;
    double p_u = 0.0;
    double sigma_l = 0.0;
    double sigma_u = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double p_hat = 0.0;
};

// Binomial factor of a (circuit, weight vector) pair at the evaluation point.
// The default implementation computes multi-parameter binomial factors from
// the stored category counts; tests may inject arbitrary factors.
using FactorFn = std::function<double(const std::string& circuit, const WeightVec& weights)>;

// Count-shift hypothesis used by the ERU criterion: evaluate the tree as if
// one more sample had been taken at a node. `shift_node` redirects the next
// sample into its first (+1) or complementary (-1) successor; `open_node`
// pretends a new subset of weight `open_weight` had been opened once, with
// the newly opened branch failing with probability 1/2.
struct EvalHypothesis {
    const SubsetNode* shift_node = nullptr;
    int shift_dir = 0;
    const CircuitNode* open_node = nullptr;
    WeightVec open_weight;
};

// The event tree: the sufficient statistic for all estimators. Category
// counts of every protocol circuit, t and L are frozen at construction so
// bounds can be evaluated at any physical rate afterwards.
class SampleTree {
  public:
    SampleTree() = default;
    SampleTree(std::string protocol, std::string root_circuit, std::size_t num_categories,
               std::map<std::string, std::vector<std::uint64_t>> circuit_counts, int ft_order,
               int max_ft_length);
    static SampleTree for_protocol(const ProtocolGraph& protocol, const NoiseParams& noise);

    // Creates nodes on first visit and increments counts along the trace.
    // Enforces at most two successors per subset node and a unique successor
    // on the fault-free path.
    void record_shot(const ShotTrace& trace);

    // Counts add; the result is independent of merge order.
    void merge(const SampleTree& other);

    std::uint64_t shots() const { return shots_; }
    const CircuitNode* root() const { return root_ ? root_.get() : nullptr; }
    const std::string& protocol() const { return protocol_; }
    const std::string& root_circuit() const { return root_circuit_; }
    std::size_t num_categories() const { return num_categories_; }
    int ft_order() const { return ft_order_; }
    int max_ft_length() const { return max_ft_length_; }
    const std::map<std::string, std::vector<std::uint64_t>>& circuit_counts() const {
        return circuit_counts_;
    }

    // Walk helpers used by the ERU criterion while a shot is in flight.
    const CircuitNode* find_circuit(std::span<const ShotStep> prefix) const;

    // Deterministic text dump, one node per line.
    void dump(std::ostream& out) const;
    std::string dump() const;

  private:
    std::string protocol_;
    std::string root_circuit_;
    std::size_t num_categories_ = 1;
    std::map<std::string, std::vector<std::uint64_t>> circuit_counts_;
    int ft_order_ = 0;
    int max_ft_length_ = 1;
    std::unique_ptr<CircuitNode> root_;
    std::uint64_t shots_ = 0;
};

// Factor function computing A_w(circuit) from the tree's category counts.
FactorFn binomial_factors(const SampleTree& tree, std::vector<double> rates);

// Full evaluation at the factors' rate point: p_L, p_U = p_L + delta, both
// sampling uncertainties, and eta = sigma_L + sigma_U + delta. Variances are
// propagated recursively from the leaves; the FT cutoff rules for unexplored
// branches are applied on the fly.
BoundsResult evaluate(const SampleTree& tree, const FactorFn& factors,
                      const EvalHypothesis* hypothesis = nullptr);

BoundsResult bounds(const SampleTree& tree, const std::vector<double>& rates);
double p_lower(const SampleTree& tree, const std::vector<double>& rates);
double delta_total(const SampleTree& tree, const std::vector<double>& rates);
std::pair<double, double> var_bounds(const SampleTree& tree, const std::vector<double>& rates);

// One multiplicative term of a root-to-leaf path: a constant factor and a
// branching rate with its variance.
struct PathTerm {
    double factor = 1.0;
    double q = 1.0;
    double v = 0.0;
};

// Goodman's formula for the variance of the path product.
double path_variance(std::span<const PathTerm> terms);

}  // namespace dss
