#pragma once

#include "aiad/rng.hpp"

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace aiad {

/// A caller broke a documented precondition (illegal action, bad horizon, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// One joint (omega, theta) hypothesis. Layout of both vectors is owned by the
/// domain that produced the sample.
struct ParameterSample {
    std::vector<double> omega;
    std::vector<double> theta;

    std::uint64_t omega_digest() const;
    std::uint64_t theta_digest() const;
    std::uint64_t digest() const { return hash_combine(omega_digest(), theta_digest()); }

    bool operator==(const ParameterSample&) const = default;
};

void to_json(nlohmann::json& j, const ParameterSample& p);
void from_json(const nlohmann::json& j, ParameterSample& p);

/// Sum of rewards[t] * gamma^t.
double discounted_return(std::span<const double> rewards, double gamma);

/// The agent's problem E: generative transitions, parameterized reward.
/// Actions are integer ids into a domain-wide action table.
template <class E>
concept EnvModel = requires(const E& env, const typename E::State& s, int a, Rng& rng, const ParameterSample& p) {
    typename E::State;
    { env.initial_state() } -> std::same_as<typename E::State>;
    { env.actions(s) } -> std::same_as<std::vector<int>>;
    { env.transition(s, a, rng) } -> std::same_as<typename E::State>;
    { env.reward(s, a, s, p) } -> std::convertible_to<double>;
    { env.discount() } -> std::convertible_to<double>;
    { env.is_terminal(s) } -> std::convertible_to<bool>;
    { env.digest(s) } -> std::same_as<std::uint64_t>;
};

enum class StepKind { agent, advise, act, yield, query, reset };

std::string to_string(StepKind k);
StepKind step_kind_from_string(const std::string& s);

/// One logged step of an interaction loop.
template <class State>
struct InteractionRecord {
    StepKind kind = StepKind::agent;
    State state{};
    std::optional<int> advice;
    std::optional<int> action;
    State next_state{};
    double reward = 0.0;
    std::optional<bool> accepted;
    /// Interaction count after this step (agent actions plus answered queries).
    int interactions = 0;
    /// Cumulative discounted true reward up to and including this step.
    double discounted_return = 0.0;
    std::optional<double> objective;
    std::optional<double> entropy;
    std::optional<double> reward_error;
    nlohmann::json extra;
};

template <class State>
struct Trajectory {
    std::vector<InteractionRecord<State>> records;
    std::uint64_t seed = 0;

    std::vector<double> rewards() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.reward);
        return out;
    }
};

/// Runs `policy` in `env` from the start state for `horizon` steps (or until
/// the domain declares termination). Same seed, same trajectory.
template <EnvModel E>
Trajectory<typename E::State> rollout_episode(const E& env,
                                              const std::function<int(const typename E::State&)>& policy,
                                              const ParameterSample& omega, int horizon, std::uint64_t seed) {
    if (horizon < 1) throw ContractViolation("rollout_episode: horizon must be >= 1");
    Trajectory<typename E::State> traj;
    traj.seed = seed;
    auto state = env.initial_state();
    double ret = 0.0;
    double discount = 1.0;
    for (int t = 0; t < horizon && !env.is_terminal(state); ++t) {
        const int a = policy(state);
        const auto legal = env.actions(state);
        if (std::find(legal.begin(), legal.end(), a) == legal.end())
            throw ContractViolation("rollout_episode: policy returned an action outside the enumerated set");
        Rng rng(seed, Stream::environment, static_cast<std::uint64_t>(t));
        auto next = env.transition(state, a, rng);
        InteractionRecord<typename E::State> rec;
        rec.kind = StepKind::agent;
        rec.state = state;
        rec.action = a;
        rec.next_state = next;
        rec.reward = env.reward(state, a, next, omega);
        ret += discount * rec.reward;
        discount *= env.discount();
        rec.discounted_return = ret;
        rec.interactions = t + 1;
        traj.records.push_back(std::move(rec));
        state = std::move(next);
    }
    return traj;
}

}  // namespace aiad
