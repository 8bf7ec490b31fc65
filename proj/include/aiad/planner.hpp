#pragma once

// Monte Carlo tree search with per-iteration root sampling of (omega, theta)
// from the assistant's belief. Advice steps are simulated through the agent
// model; Act steps go straight to the environment.

#include "aiad/agent_model.hpp"
#include "aiad/belief.hpp"
#include "aiad/decision.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace aiad {

enum class AssistKind { advise, act, yield };

struct AssistantAction {
    AssistKind kind = AssistKind::advise;
    int action = -1;  // env action id; unused for yield

    static AssistantAction advise(int a) { return {AssistKind::advise, a}; }
    static AssistantAction act(int a) { return {AssistKind::act, a}; }
    static AssistantAction yield() { return {AssistKind::yield, -1}; }

    std::uint64_t code() const {
        return (static_cast<std::uint64_t>(kind) << 32) ^ static_cast<std::uint32_t>(action);
    }
    bool operator==(const AssistantAction&) const = default;
};

std::string to_string(const AssistantAction& a);
void to_json(nlohmann::json& j, const AssistantAction& a);

/// Which assistant actions a mode may use.
struct ActionSpace {
    bool advise = true;
    bool act = false;
    bool yield = false;
    /// Whether Act(NOOP) is offered when the domain has a NOOP.
    bool act_noop = false;

    static ActionSpace advice_only() { return {true, false, false, false}; }
    static ActionSpace advice_and_automation() { return {true, true, false, false}; }
    static ActionSpace automation() { return {false, true, false, true}; }
    static ActionSpace partial_automation() { return {false, true, true, false}; }
};

struct PlannerConfig {
    double gamma = 0.95;
    int max_depth = 2;
    int n_iterations = 10000;
    double c = 0.1;
    /// Size of the belief sub-sample drawn once per planning call and cycled
    /// through per iteration. 0 draws from the full belief every iteration.
    std::size_t subsample = 100;
    /// Optional wall-clock cap; at least one visit per root action is always made.
    std::optional<double> time_limit_seconds;
};

void to_json(nlohmann::json& j, const PlannerConfig& c);
void from_json(const nlohmann::json& j, PlannerConfig& c);

struct TreeNode {
    int visits = 0;
    std::vector<AssistantAction> actions;
    std::vector<int> counts;
    std::vector<double> q;
};

/// Node table keyed by history digest.
class SearchTree {
public:
    TreeNode* find(std::uint64_t h) {
        auto it = nodes_.find(h);
        return it == nodes_.end() ? nullptr : &it->second;
    }
    const TreeNode* find(std::uint64_t h) const {
        auto it = nodes_.find(h);
        return it == nodes_.end() ? nullptr : &it->second;
    }
    TreeNode& operator[](std::uint64_t h) { return nodes_[h]; }
    std::size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }
    const std::unordered_map<std::uint64_t, TreeNode>& nodes() const { return nodes_; }

private:
    std::unordered_map<std::uint64_t, TreeNode> nodes_;
};

/// UCT: untried actions first (lowest index), else argmax of
/// Q + c * sqrt(ln N / N_a) with ties to the lowest index.
std::size_t uct_select(const TreeNode& node, double c);

/// Index of the highest Q (ties to the lowest index).
std::size_t greedy_index(const TreeNode& node);

template <class D>
concept PlanningDomain = EnvModel<D> && AgentDomain<D>;

template <PlanningDomain D>
std::vector<AssistantAction> assistant_actions(const D& domain, const typename D::State& s, const ActionSpace& space) {
    std::vector<AssistantAction> out;
    if (domain.is_terminal(s)) return out;
    const auto env_actions = domain.actions(s);
    const auto noop = domain.noop_action();
    if (space.advise)
        for (int a : env_actions) out.push_back(AssistantAction::advise(a));
    if (space.act)
        for (int a : env_actions)
            if (space.act_noop || !noop || a != *noop) out.push_back(AssistantAction::act(a));
    if (space.yield) out.push_back(AssistantAction::yield());
    return out;
}

template <class State>
struct SimulatedStep {
    int env_action;
    State next;
};

/// Samples one step of the assistant's MDP for a fixed hypothesis: the
/// generative form of T(s' | s, a') = sum_a pi(a | s, a') T(s' | s, a).
template <PlanningDomain D>
SimulatedStep<typename D::State> sample_assistant_transition(const D& domain, const AgentModel<D>* model,
                                                             const typename D::State& s, const AssistantAction& act,
                                                             const ParameterSample& p, Rng& rng) {
    int a = act.action;
    if (act.kind != AssistKind::act) {
        if (!model) throw ContractViolation("advice and yield steps need an agent model");
        const std::optional<int> advice = act.kind == AssistKind::advise ? std::optional<int>(act.action) : std::nullopt;
        a = model->policy_unchecked(s, advice, p).sample(rng);
    }
    return {a, domain.transition(s, a, rng)};
}

template <class State>
using LeafValueFn = std::function<double(const State&, const ParameterSample&, int depth)>;

struct PlanResult {
    AssistantAction action;
    std::vector<AssistantAction> root_actions;
    std::vector<double> root_q;
    std::vector<int> root_counts;
    int iterations = 0;
    double seconds = 0.0;

    nlohmann::json telemetry() const;
};

/// Generalized hidden-parameter MCTS. One instance may be reused across
/// planning calls; every call starts from a fresh tree.
template <PlanningDomain D>
class Ghpmcp {
public:
    using State = typename D::State;
    /// Called on every backup with (history digest, action index, return).
    using BackupObserver = std::function<void(std::uint64_t, std::size_t, double)>;

    Ghpmcp(const D& domain, const AgentModel<D>* model, PlannerConfig cfg, ActionSpace space)
        : domain_(&domain), model_(model), cfg_(cfg), space_(space) {}

    void set_value_estimator(LeafValueFn<State> f) { estimator_ = std::move(f); }
    void set_backup_observer(BackupObserver f) { observer_ = std::move(f); }
    const PlannerConfig& config() const { return cfg_; }
    const SearchTree& tree() const { return tree_; }
    std::uint64_t root_digest(const State& s) const { return hash_combine(0x726f6f74ULL, domain_->digest(s)); }

    PlanResult plan(const State& root, const ParticleBelief& belief, std::uint64_t seed) {
        const auto start = std::chrono::steady_clock::now();
        tree_.clear();
        const auto root_actions = assistant_actions(*domain_, root, space_);
        if (root_actions.empty()) throw ContractViolation("plan: empty assistant action space");
        if (cfg_.n_iterations < static_cast<int>(root_actions.size()))
            throw ContractViolation("plan: n_iterations must cover every root action");
        if (belief.size() == 0) throw ContractViolation("plan: empty belief");

        Rng rng(seed, Stream::planner);
        std::optional<ParticleBelief> sub;
        if (cfg_.subsample > 0) sub = subsample(belief, cfg_.subsample, seed);

        const std::uint64_t h0 = root_digest(root);
        int it = 0;
        for (; it < cfg_.n_iterations; ++it) {
            if (cfg_.time_limit_seconds && it >= static_cast<int>(root_actions.size()) && (it & 31) == 0) {
                const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
                if (el.count() > *cfg_.time_limit_seconds) break;
            }
            const ParameterSample& p = sub ? sub->particle(static_cast<std::size_t>(it) % sub->size())
                                           : belief.particle(belief.draw(rng));
            simulate(h0, root, p, 1, rng);
        }

        const TreeNode& node = tree_[h0];
        PlanResult res;
        res.root_actions = node.actions;
        res.root_q = node.q;
        res.root_counts = node.counts;
        res.action = node.actions[greedy_index(node)];
        res.iterations = it;
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return res;
    }

private:
    double simulate(std::uint64_t h, const State& s, const ParameterSample& p, int depth, Rng& rng) {
        TreeNode& node = tree_[h];
        if (node.visits == 0 && node.actions.empty()) {
            node.actions = assistant_actions(*domain_, s, space_);
            node.counts.assign(node.actions.size(), 0);
            node.q.assign(node.actions.size(), 0.0);
        }
        if (node.actions.empty()) return 0.0;

        const std::size_t i = uct_select(node, cfg_.c);
        const AssistantAction act = node.actions[i];
        auto step = sample_assistant_transition(*domain_, model_, s, act, p, rng);
        const double r = domain_->reward(s, step.env_action, step.next, p);
        // The assistant observes its own action, the agent's action and the next state.
        const std::uint64_t h2 =
            hash_combine(hash_combine(h, act.code()),
                         hash_combine(static_cast<std::uint64_t>(step.env_action), domain_->digest(step.next)));
        const bool leaf = node.counts[i] == 0 || depth >= cfg_.max_depth;
        double q;
        if (leaf) {
            q = r + cfg_.gamma * (estimator_ ? estimator_(step.next, p, depth + 1) : 0.0);
        } else {
            q = r + cfg_.gamma * simulate(h2, step.next, p, depth + 1, rng);
        }
        // unordered_map references survive rehashing, so `node` is still valid.
        node.visits += 1;
        node.counts[i] += 1;
        node.q[i] += (q - node.q[i]) / node.counts[i];
        if (observer_) observer_(h, i, q);
        return q;
    }

    const D* domain_;
    const AgentModel<D>* model_;
    PlannerConfig cfg_;
    ActionSpace space_;
    LeafValueFn<State> estimator_;
    BackupObserver observer_;
    SearchTree tree_;
};

/// Vanilla MCTS on the true environment where each iteration's reward uses
/// omega drawn from the belief. With a point-mass belief at the true omega
/// this is the oracle automation policy.
template <PlanningDomain D>
int automation_plan(const D& domain, const typename D::State& root, const ParticleBelief& belief,
                    const PlannerConfig& cfg, std::uint64_t seed, PlanResult* result = nullptr) {
    Ghpmcp<D> planner(domain, nullptr, cfg, ActionSpace::automation());
    auto res = planner.plan(root, belief, seed);
    if (result) *result = res;
    return res.action.action;
}

}  // namespace aiad
