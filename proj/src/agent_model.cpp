#include "aiad/agent_model.hpp"

#include <numeric>

namespace aiad {

std::size_t QEstimate::index_of(int action) const {
    auto it = std::lower_bound(actions.begin(), actions.end(), action);
    if (it == actions.end() || *it != action) return npos;
    return static_cast<std::size_t>(it - actions.begin());
}

std::optional<double> QEstimate::find(int action) const {
    const auto i = index_of(action);
    if (i == npos) return std::nullopt;
    return values[i];
}

double ActionDistribution::prob(int action) const {
    auto it = std::lower_bound(actions.begin(), actions.end(), action);
    if (it == actions.end() || *it != action) return 0.0;
    return probs[static_cast<std::size_t>(it - actions.begin())];
}

double ActionDistribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

int ActionDistribution::sample(Rng& rng) const {
    if (actions.empty()) throw ContractViolation("cannot sample from an empty action distribution");
    double u = rng.uniform() * total();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        u -= probs[i];
        if (u < 0.0) return actions[i];
    }
    // Rounding left a sliver of mass: return the last action with support.
    for (std::size_t i = actions.size(); i-- > 0;)
        if (probs[i] > 0.0) return actions[i];
    return actions.back();
}

ActionDistribution boltzmann_distribution(const QEstimate& q, std::span<const double> prior, double beta) {
    if (q.actions.empty()) throw ContractViolation("boltzmann_distribution: empty action set");
    if (prior.size() != q.size()) throw ContractViolation("boltzmann_distribution: prior size mismatch");
    if (beta < 0.0) throw ContractViolation("boltzmann_distribution: beta must be non-negative");
    double max_q = -kInf;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (prior[i] > 0.0) max_q = std::max(max_q, q.values[i]);
    if (max_q == -kInf) throw ContractViolation("boltzmann_distribution: prior has no mass");

    ActionDistribution out;
    out.actions = q.actions;
    out.probs.resize(q.size());
    double z = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (prior[i] < 0.0) throw ContractViolation("boltzmann_distribution: negative prior");
        const double w = prior[i] > 0.0 ? prior[i] * std::exp(beta * (q.values[i] - max_q)) : 0.0;
        out.probs[i] = w;
        z += w;
    }
    for (auto& p : out.probs) p /= z;
    return out;
}

ActionDistribution own_choice_distribution(const QEstimate& q, double beta1) {
    const std::vector<double> prior(q.size(), 1.0);
    return boltzmann_distribution(q, prior, beta1);
}

double switch_probability(double q_own, double q_advised, double beta2) {
    if (q_advised == -kInf) return 0.0;
    if (beta2 == 0.0) return 0.5;
    return logistic(beta2 * (q_advised - q_own));
}

ActionDistribution apply_switch(const ActionDistribution& dist, const QEstimate& q, int target, double beta2) {
    const auto target_q = q.find(target);
    if (!target_q) return dist;

    ActionDistribution out = dist;
    auto pos = std::lower_bound(out.actions.begin(), out.actions.end(), target);
    std::size_t t;
    if (pos == out.actions.end() || *pos != target) {
        t = static_cast<std::size_t>(pos - out.actions.begin());
        out.actions.insert(pos, target);
        out.probs.insert(out.probs.begin() + static_cast<long>(t), 0.0);
    } else {
        t = static_cast<std::size_t>(pos - out.actions.begin());
    }
    double moved = 0.0;
    for (std::size_t i = 0; i < out.actions.size(); ++i) {
        if (i == t || out.probs[i] == 0.0) continue;
        const auto own_q = q.find(out.actions[i]);
        const double p = switch_probability(own_q.value_or(-kInf), *target_q, beta2);
        const double m = out.probs[i] * p;
        out.probs[i] -= m;
        moved += m;
    }
    out.probs[t] += moved;
    return out;
}

ActionDistribution advised_policy_from(const ActionDistribution& own, const QEstimate& q, std::optional<int> advice,
                                       double beta2, std::optional<int> noop) {
    ActionDistribution dist = advice ? apply_switch(own, q, *advice, beta2) : own;
    if (noop) dist = apply_switch(dist, q, *noop, beta2);
    return dist;
}

ActionDistribution advised_policy(const QEstimate& q, std::optional<int> advice, const AgentParams& params,
                                  std::optional<int> noop) {
    return advised_policy_from(own_choice_distribution(q, params.beta1), q, advice, params.beta2, noop);
}

}  // namespace aiad
