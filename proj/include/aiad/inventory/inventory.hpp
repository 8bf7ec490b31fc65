#pragma once

// Inventory management with three products, stochastic Gaussian demand and a
// shared production capacity.

#include "aiad/agent_model.hpp"
#include "aiad/belief.hpp"
#include "aiad/decision.hpp"
#include "aiad/distributions.hpp"

#include <array>
#include <optional>
#include <vector>

#include <json.hpp>

namespace aiad::inventory {

inline constexpr int kProducts = 3;
using Levels = std::array<int, kProducts>;

struct Demand {
    double mu = 0.0;
    double sigma = 0.0;
    bool operator==(const Demand&) const = default;
};

/// schedule[t][i] is the demand distribution of product i at step t.
using Schedule = std::vector<std::array<Demand, kProducts>>;

struct State {
    Levels inventory{};
    int t = 0;
    // Outcome of the step that produced this state; not part of the digest.
    Levels last_sold{};
    Levels last_lost{};
    bool operator==(const State&) const = default;
};

struct Config {
    int horizon = 50;
    int capacity = 12;
    int batch = 2;
    double gamma = 0.99;

    double demand_mu_mean = 2.0;
    double demand_mu_sd = 0.75;
    double demand_mu_hi = 5.0;
    double demand_sigma_dof = 0.75;

    double storage_a = 2.5;
    double storage_b = 8.0;
    double lost_a = 3.0;
    double lost_b = 3.0;
    double bias_sd = 1.5;
    double bias_limit = 3.0;

    double beta1 = 2.0;
    double beta2 = 20.0;
    /// When set, the assistant assumes every agent has this bias.
    std::optional<double> assumed_bias;

    int bfs_iterations = 300;
    int bfs_depth = 2;
    double agent_gamma = 0.99;

    static Config desk_scale();
};

void to_json(nlohmann::json& j, const Config& c);
void from_json(const nlohmann::json& j, Config& c);
void to_json(nlohmann::json& j, const Demand& d);
void from_json(const nlohmann::json& j, Demand& d);

Schedule generate_schedule(const Config& cfg, std::uint64_t seed);

/// omega = [v_1, v_2, v_3, c, l]; theta = [bias, beta1, beta2].
struct Omega {
    std::array<double, kProducts> profit{};
    double storage = 0.0;
    double lost = 0.0;
};
Omega decode_omega(const ParameterSample& p);
double decode_bias(const ParameterSample& p);
ParameterSample encode(const Omega& w, double bias, double beta1, double beta2);

struct StepOutcome {
    Levels demand{};
    Levels sold{};
    Levels lost{};
    Levels next{};
};

/// Deterministic core of a transition given realized demand.
StepOutcome settle(const Levels& inventory, const Levels& production, const Levels& demand);

/// sum v_i sold_i - c sum I'_i - l sum lost_i.
double step_reward(const Levels& sold, const Levels& lost, const Levels& next, const Omega& w);

class Inventory {
public:
    using State = inventory::State;

    Inventory(Config cfg, Schedule schedule);

    const Config& config() const { return cfg_; }
    const Schedule& schedule() const { return schedule_; }
    /// All production vectors, indexed by action id.
    const std::vector<Levels>& production_table() const { return table_; }
    const Levels& production(int a) const;
    int action_of(const Levels& production) const;

    State initial_state() const { return {}; }
    std::vector<int> actions(const State& s) const;
    State transition(const State& s, int a, Rng& rng) const;
    double reward(const State& s, int a, const State& next, const ParameterSample& p) const;
    double discount() const { return cfg_.gamma; }
    bool is_terminal(const State& s) const { return s.t >= cfg_.horizon; }
    std::uint64_t digest(const State& s) const;
    std::optional<int> noop_action() const { return std::nullopt; }

    /// Point-estimate demand the agent plans with: max(0, mu + bias * sigma).
    double demand_estimate(int t, int product, double bias) const;

    QEstimate agent_q(const State& s, const ParameterSample& p) const;
    AgentParams agent_params(const ParameterSample& p) const;

    ParameterSample sample_true_params(Rng& rng) const;
    ParameterSample sample_belief_particle(Rng& rng) const { return sample_belief_particle(rng, cfg_.assumed_bias); }
    ParameterSample sample_belief_particle(Rng& rng, std::optional<double> assumed_bias) const;
    BeliefBinning binning() const;
    int omega_size() const { return kProducts + 2; }

    nlohmann::json state_json(const State& s) const;
    State state_from_json(const nlohmann::json& j) const;

private:
    Config cfg_;
    Schedule schedule_;
    std::vector<Levels> table_;
};

}  // namespace aiad::inventory
