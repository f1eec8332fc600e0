#include "dss/sample_tree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dss {

SampleTree::SampleTree(std::string protocol, std::string root_circuit, std::size_t num_categories,
                       std::map<std::string, std::vector<std::uint64_t>> circuit_counts,
                       int ft_order, int max_ft_length)
    : protocol_(std::move(protocol)),
      root_circuit_(std::move(root_circuit)),
      num_categories_(num_categories),
      circuit_counts_(std::move(circuit_counts)),
      ft_order_(ft_order),
      max_ft_length_(max_ft_length) {}

SampleTree SampleTree::for_protocol(const ProtocolGraph& protocol, const NoiseParams& noise) {
    std::map<std::string, std::vector<std::uint64_t>> counts;
    for (const auto& [name, circuit] : protocol.circuits)
        counts[name] = category_counts(circuit, noise);
    return SampleTree(protocol.name, protocol.root, noise.num_categories(), std::move(counts),
                      protocol.ft_order, protocol.max_ft_length);
}

void SampleTree::record_shot(const ShotTrace& trace) {
    if (trace.steps.empty()) throw std::invalid_argument("record_shot: empty trace");
    const auto& last = trace.steps.back().successor;
    if (last.kind == SuccessorKey::Kind::circuit)
        throw std::invalid_argument("record_shot: trace does not end on a terminal");
    if ((last.kind == SuccessorKey::Kind::fail) != trace.fail)
        throw std::invalid_argument("record_shot: verdict inconsistent with final successor");

    if (!root_) root_ = std::make_unique<CircuitNode>(CircuitNode{root_circuit_, {}});
    CircuitNode* node = root_.get();
    std::uint32_t path_weight = 0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const ShotStep& step = trace.steps[i];
        if (node == nullptr || step.circuit != node->circuit)
            throw std::invalid_argument("record_shot: trace inconsistent with tree structure");
        if (step.weights.size() != num_categories_)
            throw std::invalid_argument("record_shot: weight vector length mismatch");
        SubsetNode& subset = node->subsets[step.weights];
        subset.visits++;
        path_weight += total_weight(step.weights);
        Successor& succ = subset.successors[step.successor];
        succ.count++;
        if (subset.successors.size() > 2)
            throw std::runtime_error("record_shot: more than two successors at a subset node");
        if (path_weight == 0 && subset.successors.size() > 1)
            throw std::runtime_error("record_shot: branching observed on the fault-free path");
        if (step.successor.kind == SuccessorKey::Kind::circuit) {
            if (i + 1 == trace.steps.size())
                throw std::invalid_argument("record_shot: circuit successor at end of trace");
            if (!succ.node)
                succ.node = std::make_unique<CircuitNode>(CircuitNode{step.successor.circuit, {}});
            node = succ.node.get();
        } else {
            node = nullptr;
        }
    }
    ++shots_;
}

static void merge_circuit(CircuitNode& dst, const CircuitNode& src) {
    for (const auto& [weights, src_subset] : src.subsets) {
        SubsetNode& dst_subset = dst.subsets[weights];
        dst_subset.visits += src_subset.visits;
        for (const auto& [key, src_succ] : src_subset.successors) {
            Successor& dst_succ = dst_subset.successors[key];
            dst_succ.count += src_succ.count;
            if (key.kind == SuccessorKey::Kind::circuit) {
                if (!dst_succ.node)
                    dst_succ.node = std::make_unique<CircuitNode>(CircuitNode{key.circuit, {}});
                merge_circuit(*dst_succ.node, *src_succ.node);
            }
        }
        if (dst_subset.successors.size() > 2)
            throw std::runtime_error("merge: more than two successors at a subset node");
    }
}

void SampleTree::merge(const SampleTree& other) {
    if (other.protocol_ != protocol_ || other.num_categories_ != num_categories_)
        throw std::invalid_argument("merge: trees belong to different runs");
    if (!other.root_) return;
    if (!root_) root_ = std::make_unique<CircuitNode>(CircuitNode{root_circuit_, {}});
    merge_circuit(*root_, *other.root_);
    shots_ += other.shots_;
}

const CircuitNode* SampleTree::find_circuit(std::span<const ShotStep> prefix) const {
    const CircuitNode* node = root_.get();
    for (const ShotStep& step : prefix) {
        if (node == nullptr || node->circuit != step.circuit) return nullptr;
        auto subset = node->subsets.find(step.weights);
        if (subset == node->subsets.end()) return nullptr;
        auto succ = subset->second.successors.find(step.successor);
        if (succ == subset->second.successors.end()) return nullptr;
        node = succ->second.node.get();
    }
    return node;
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

struct PV {
    double p = 0.0;
    double v = 0.0;
};

struct NodeEval {
    PV lower, upper;
};

struct EvalContext {
    const FactorFn* factors;
    const EvalHypothesis* hyp;
    int t = 0;
    double delta_node_value = 1.0;          // min(1, L(1 - M0))
    std::vector<WeightVec> unit_weights;    // e_k per category
};

// Variance recursion at a binary branching: q to child a, 1-q to child b.
PV combine(double q, double v, const PV& a, const PV& b) {
    PV out;
    out.p = q * a.p + (1.0 - q) * b.p;
    const double diff = a.p - b.p;
    out.v = v * (diff * diff + a.v + b.v) + q * q * a.v + (1.0 - q) * (1.0 - q) * b.v;
    return out;
}

NodeEval eval_circuit(const EvalContext& ctx, const CircuitNode& node, std::uint32_t path_weight);

NodeEval eval_subset(const EvalContext& ctx, const SubsetNode& node, std::uint32_t path_weight) {
    NodeEval first{}, second{};
    std::uint64_t n = node.visits;
    std::uint64_t m = 0;
    std::size_t index = 0;
    for (const auto& [key, succ] : node.successors) {
        NodeEval child{};
        switch (key.kind) {
            case SuccessorKey::Kind::circuit:
                child = eval_circuit(ctx, *succ.node, path_weight);
                break;
            case SuccessorKey::Kind::fail:
                child.lower.p = 1.0;
                child.upper.p = 1.0;
                break;
            case SuccessorKey::Kind::nofail:
                break;
        }
        if (index == 0) {
            first = child;
            m = succ.count;
        } else {
            second = child;
        }
        ++index;
    }
    if (ctx.hyp != nullptr && ctx.hyp->shift_node == &node) {
        n += 1;
        if (ctx.hyp->shift_dir > 0) m += 1;
    }
    const bool frozen = path_weight == 0;
    if (index < 2 && !frozen) {
        // The unobserved complementary branch: worst case bounded by the FT
        // argument while the total weight stays within the tolerance t,
        // otherwise by 1.
        second = NodeEval{};
        second.upper.p =
            path_weight <= static_cast<std::uint32_t>(ctx.t) ? ctx.delta_node_value : 1.0;
    }
    const double q = n == 0 ? 1.0 : static_cast<double>(m) / static_cast<double>(n);
    const double v = frozen ? 0.0 : wilson_variance({m, n, false});
    NodeEval out;
    out.lower = combine(q, v, first.lower, second.lower);
    out.upper = combine(q, v, first.upper, second.upper);
    return out;
}

NodeEval eval_circuit(const EvalContext& ctx, const CircuitNode& node, std::uint32_t path_weight) {
    NodeEval out{};
    double covered = 0.0;
    auto add_child = [&](double a, const NodeEval& child) {
        covered += a;
        out.lower.p += a * child.lower.p;
        out.lower.v += a * a * child.lower.v;
        out.upper.p += a * child.upper.p;
        out.upper.v += a * a * child.upper.v;
    };
    for (const auto& [weights, subset] : node.subsets) {
        const double a = (*ctx.factors)(node.circuit, weights);
        add_child(a, eval_subset(ctx, subset, path_weight + total_weight(weights)));
    }
    if (ctx.hyp != nullptr && ctx.hyp->open_node == &node &&
        node.subsets.find(ctx.hyp->open_weight) == node.subsets.end()) {
        // Hypothetically opened subset: one sample taken, downstream failure
        // assumed 1/2, Wilson variance of (q = 1/2, N = 1).
        const double a = (*ctx.factors)(node.circuit, ctx.hyp->open_weight);
        NodeEval pseudo{};
        pseudo.lower = {0.5, 0.125};
        pseudo.upper = {0.5, 0.125};
        add_child(a, pseudo);
    }
    if (ctx.t == 1 && path_weight == 0) {
        // Unsampled unit-weight subsets on the fault-free path contribute the
        // FT bound instead of their full binomial mass.
        for (const WeightVec& unit : ctx.unit_weights) {
            if (node.subsets.find(unit) != node.subsets.end()) continue;
            if (ctx.hyp != nullptr && ctx.hyp->open_node == &node && ctx.hyp->open_weight == unit)
                continue;
            const double a = (*ctx.factors)(node.circuit, unit);
            covered += a;
            out.upper.p += a * ctx.delta_node_value;
        }
    }
    const double remainder = std::max(0.0, 1.0 - covered);
    out.upper.p += remainder;
    return out;
}

}  // namespace

FactorFn binomial_factors(const SampleTree& tree, std::vector<double> rates) {
    if (rates.size() != tree.num_categories())
        throw std::invalid_argument("binomial_factors: rate vector length mismatch");
    const auto* counts = &tree.circuit_counts();
    return [counts, rates = std::move(rates)](const std::string& circuit, const WeightVec& weights) {
        return multi_binomial_factor(counts->at(circuit), weights, rates);
    };
}

BoundsResult evaluate(const SampleTree& tree, const FactorFn& factors,
                      const EvalHypothesis* hypothesis) {
    EvalContext ctx;
    ctx.factors = &factors;
    ctx.hyp = hypothesis;
    ctx.t = tree.ft_order();
    const WeightVec zero(tree.num_categories(), 0);
    double m0 = 1.0;
    for (const auto& [name, counts] : tree.circuit_counts())
        m0 = std::min(m0, factors(name, zero));
    ctx.delta_node_value =
        std::clamp(static_cast<double>(tree.max_ft_length()) * (1.0 - m0), 0.0, 1.0);
    for (std::size_t k = 0; k < tree.num_categories(); ++k) {
        WeightVec unit(tree.num_categories(), 0);
        unit[k] = 1;
        ctx.unit_weights.push_back(std::move(unit));
    }

    NodeEval eval{};
    if (tree.root() != nullptr) {
        eval = eval_circuit(ctx, *tree.root(), 0);
    } else {
        const CircuitNode empty{tree.root_circuit(), {}};
        eval = eval_circuit(ctx, empty, 0);
    }
    BoundsResult res;
    res.p_l = std::max(0.0, eval.lower.p);
    res.p_u = std::max(res.p_l, std::min(1.0, eval.upper.p));
    res.delta = res.p_u - res.p_l;
    res.sigma_l = std::sqrt(std::max(0.0, eval.lower.v));
    res.sigma_u = std::sqrt(std::max(0.0, eval.upper.v));
    res.eta = res.sigma_l + res.sigma_u + res.delta;
    res.p_hat = 0.5 * (res.p_l + res.p_u);
    return res;
}

BoundsResult bounds(const SampleTree& tree, const std::vector<double>& rates) {
    return evaluate(tree, binomial_factors(tree, rates));
}

double p_lower(const SampleTree& tree, const std::vector<double>& rates) {
    return bounds(tree, rates).p_l;
}

double delta_total(const SampleTree& tree, const std::vector<double>& rates) {
    return bounds(tree, rates).delta;
}

std::pair<double, double> var_bounds(const SampleTree& tree, const std::vector<double>& rates) {
    const BoundsResult res = bounds(tree, rates);
    return {res.sigma_l * res.sigma_l, res.sigma_u * res.sigma_u};
}

double path_variance(std::span<const PathTerm> terms) {
    double a = 1.0, second_moment = 1.0, mean_sq = 1.0;
    for (const PathTerm& term : terms) {
        a *= term.factor;
        second_moment *= term.v + term.q * term.q;
        mean_sq *= term.q * term.q;
    }
    return a * a * (second_moment - mean_sq);
}

// ---------------------------------------------------------------------------
// Text dump.

namespace {

void dump_weights(std::ostream& out, const WeightVec& weights) {
    out << "[";
    for (std::size_t k = 0; k < weights.size(); ++k) out << (k ? "," : "") << weights[k];
    out << "]";
}

void dump_circuit_node(std::ostream& out, const CircuitNode& node, std::uint32_t path_weight,
                       int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    out << pad << "circuit " << node.circuit << "\n";
    for (const auto& [weights, subset] : node.subsets) {
        const std::uint32_t w = path_weight + total_weight(weights);
        out << pad << "  subset w=";
        dump_weights(out, weights);
        out << " visits=" << subset.visits;
        if (w == 0) out << " frozen";
        out << "\n";
        for (const auto& [key, succ] : subset.successors) {
            out << pad << "    -> ";
            switch (key.kind) {
                case SuccessorKey::Kind::circuit: out << "circuit " << key.circuit; break;
                case SuccessorKey::Kind::fail: out << "fail"; break;
                case SuccessorKey::Kind::nofail: out << "nofail"; break;
            }
            out << " n=" << succ.count << "\n";
            if (succ.node) dump_circuit_node(out, *succ.node, w, depth + 3);
        }
    }
}

}  // namespace

void SampleTree::dump(std::ostream& out) const {
    out << "tree protocol=" << protocol_ << " shots=" << shots_ << " categories=" << num_categories_
        << " t=" << ft_order_ << " L=" << max_ft_length_ << "\n";
    if (root_) dump_circuit_node(out, *root_, 0, 0);
}

std::string SampleTree::dump() const {
    std::ostringstream out;
    dump(out);
    return out.str();
}

}  // namespace dss
