#pragma once

// Boltzmann-rational agent model: own choice, advice switch, NOOP
// self-recommendation, and the depth-limited best-first search that supplies
// the agent's Q-values.

#include "aiad/decision.hpp"
#include "aiad/distributions.hpp"
#include "aiad/rng.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace aiad {

/// Q-values of one state under fixed (theta, omega), defined on the
/// agent-visible action set. `actions` is sorted ascending.
struct QEstimate {
    std::vector<int> actions;
    std::vector<double> values;

    std::size_t size() const { return actions.size(); }
    std::optional<double> find(int action) const;
    /// Index of `action` in `actions`, or npos.
    std::size_t index_of(int action) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct ActionDistribution {
    std::vector<int> actions;
    std::vector<double> probs;

    double prob(int action) const;
    double total() const;
    int sample(Rng& rng) const;
};

struct AgentParams {
    double beta1 = 1.0;
    double beta2 = 10.0;
};

/// p(a) proportional to prior(a) * exp(beta * q(a)), max-shifted.
ActionDistribution boltzmann_distribution(const QEstimate& q, std::span<const double> prior, double beta);

/// A1: Boltzmann choice over the agent-visible actions with a uniform prior.
ActionDistribution own_choice_distribution(const QEstimate& q, double beta1);

/// Logistic probability of switching from an action valued q_own to one valued q_advised.
double switch_probability(double q_own, double q_advised, double beta2);

/// One switch step toward `target`: every action a keeps (1 - p(a -> target))
/// of its mass and hands the rest to `target`. A target the agent cannot see
/// (not in `q`) has value -inf and attracts nothing.
ActionDistribution apply_switch(const ActionDistribution& dist, const QEstimate& q, int target, double beta2);

/// The full agent policy given optional advice: A1, then the advice switch
/// (A2), then the NOOP self-recommendation when the domain has a NOOP.
ActionDistribution advised_policy(const QEstimate& q, std::optional<int> advice, const AgentParams& params,
                                  std::optional<int> noop = std::nullopt);

/// Same as `advised_policy`, reusing a precomputed A1.
ActionDistribution advised_policy_from(const ActionDistribution& own, const QEstimate& q, std::optional<int> advice,
                                       double beta2, std::optional<int> noop);

/// A deterministic model the agent plans in (its view of the problem).
template <class V>
concept SearchView = requires(const V& v, const typename V::State& s, int a) {
    typename V::State;
    { v.actions(s) } -> std::same_as<std::vector<int>>;
    { v.step(s, a) } -> std::same_as<std::pair<typename V::State, double>>;
    { v.discount() } -> std::convertible_to<double>;
    /// Per-step reward upper bound used for optimistic frontier values.
    { v.reward_bound() } -> std::convertible_to<double>;
    /// Actions that end deliberation (NOOP) are never expanded further.
    { v.is_leaf_action(a) } -> std::convertible_to<bool>;
};

/// Best-first search over `view` from `root`. Each iteration expands the
/// frontier node with the highest optimistic value
///   accumulated discounted reward + gamma^depth * reward_bound
/// up to `depth_limit` steps. Q of a root action is the best discounted
/// return over the complete paths found beneath it, where a path is complete
/// when it reaches the depth limit, a leaf action, or a state without
/// actions. A root action whose subtree ran out of budget before any path
/// completed falls back to the best partial return seen. Ties go to the
/// earliest generated node, so lower action indices win.
template <SearchView V>
QEstimate bfs_q_estimate(const V& view, const typename V::State& root, int iterations, int depth_limit) {
    using State = typename V::State;
    QEstimate out;
    out.actions = view.actions(root);
    if (out.actions.empty()) return out;
    if (iterations < static_cast<int>(out.actions.size()))
        throw ContractViolation("bfs_q_estimate: iterations must cover every root action");
    if (depth_limit < 1) throw ContractViolation("bfs_q_estimate: depth_limit must be >= 1");

    struct Node {
        State state;
        std::size_t root_index;
        int depth;
        double value;
        double discount;  // gamma^depth
    };
    const double gamma = view.discount();
    const double bound = view.reward_bound();
    std::vector<Node> nodes;
    using Entry = std::pair<double, long>;  // (priority, -node index)
    std::priority_queue<Entry> frontier;
    std::vector<double> complete(out.actions.size(), -kInf);
    std::vector<double> partial(out.actions.size(), -kInf);

    auto push = [&](Node n) {
        const double priority = n.value + n.discount * bound;
        partial[n.root_index] = std::max(partial[n.root_index], n.value);
        nodes.push_back(std::move(n));
        frontier.emplace(priority, -static_cast<long>(nodes.size() - 1));
    };
    for (std::size_t i = 0; i < out.actions.size(); ++i) {
        auto [next, r] = view.step(root, out.actions[i]);
        if (depth_limit > 1 && !view.is_leaf_action(out.actions[i]))
            push(Node{std::move(next), i, 1, r, gamma});
        else
            complete[i] = r;
    }
    for (int it = 1; it < iterations && !frontier.empty(); ++it) {
        const auto idx = static_cast<std::size_t>(-frontier.top().second);
        frontier.pop();
        const Node node = nodes[idx];
        const auto acts = view.actions(node.state);
        if (acts.empty()) complete[node.root_index] = std::max(complete[node.root_index], node.value);
        for (int a : acts) {
            auto [next, r] = view.step(node.state, a);
            const double value = node.value + node.discount * r;
            if (node.depth + 1 < depth_limit && !view.is_leaf_action(a))
                push(Node{std::move(next), node.root_index, node.depth + 1, value, node.discount * gamma});
            else
                complete[node.root_index] = std::max(complete[node.root_index], value);
        }
    }
    out.values.resize(out.actions.size());
    for (std::size_t i = 0; i < out.actions.size(); ++i)
        out.values[i] = complete[i] > -kInf ? complete[i] : partial[i];
    return out;
}

/// Requirements on a domain for driving the agent model.
template <class D>
concept AgentDomain = requires(const D& d, const typename D::State& s, const ParameterSample& p) {
    { d.agent_q(s, p) } -> std::same_as<QEstimate>;
    { d.agent_params(p) } -> std::same_as<AgentParams>;
    { d.noop_action() } -> std::same_as<std::optional<int>>;
    { d.digest(s) } -> std::same_as<std::uint64_t>;
};

struct AgentChoice {
    QEstimate q;
    ActionDistribution own;  // A1
};

/// Memoizing front end of the agent model for one domain instance. Q-search
/// results are cached per (state digest, parameter digest); safe for
/// concurrent readers.
template <AgentDomain D>
class AgentModel {
public:
    using State = typename D::State;

    explicit AgentModel(const D& domain, std::size_t max_cache_entries = 400000)
        : domain_(&domain), max_entries_(max_cache_entries) {}

    const D& domain() const { return *domain_; }

    std::shared_ptr<const AgentChoice> choice(const State& s, const ParameterSample& p) const {
        const std::uint64_t key = hash_combine(domain_->digest(s), p.digest());
        {
            std::shared_lock lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        auto entry = std::make_shared<AgentChoice>();
        entry->q = domain_->agent_q(s, p);
        entry->own = own_choice_distribution(entry->q, domain_->agent_params(p).beta1);
        std::unique_lock lock(mutex_);
        if (cache_.size() >= max_entries_) cache_.clear();
        return cache_.emplace(key, std::move(entry)).first->second;
    }

    /// Agent policy without checking that the advice is a legal env action.
    ActionDistribution policy_unchecked(const State& s, std::optional<int> advice, const ParameterSample& p) const {
        const auto c = choice(s, p);
        return advised_policy_from(c->own, c->q, advice, domain_->agent_params(p).beta2, domain_->noop_action());
    }

    ActionDistribution policy(const State& s, std::optional<int> advice, const ParameterSample& p) const {
        if (advice) {
            const auto legal = domain_->actions(s);
            if (std::find(legal.begin(), legal.end(), *advice) == legal.end())
                throw ContractViolation("advice is not a legal environment action");
        }
        return policy_unchecked(s, advice, p);
    }

    double likelihood(const State& s, std::optional<int> advice, int action, const ParameterSample& p) const {
        return policy_unchecked(s, advice, p).prob(action);
    }

    int sample(const State& s, std::optional<int> advice, const ParameterSample& p, Rng& rng) const {
        return policy(s, advice, p).sample(rng);
    }

    std::size_t cache_size() const {
        std::shared_lock lock(mutex_);
        return cache_.size();
    }

private:
    const D* domain_;
    std::size_t max_entries_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::uint64_t, std::shared_ptr<const AgentChoice>> cache_;
};

}  // namespace aiad
