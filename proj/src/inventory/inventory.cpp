#include "aiad/inventory/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aiad::inventory {

void to_json(nlohmann::json& j, const Config& c) {
    j = nlohmann::json{{"horizon", c.horizon},
                       {"capacity", c.capacity},
                       {"batch", c.batch},
                       {"gamma", c.gamma},
                       {"demand_mu_mean", c.demand_mu_mean},
                       {"demand_mu_sd", c.demand_mu_sd},
                       {"demand_mu_hi", c.demand_mu_hi},
                       {"demand_sigma_dof", c.demand_sigma_dof},
                       {"storage_a", c.storage_a},
                       {"storage_b", c.storage_b},
                       {"lost_a", c.lost_a},
                       {"lost_b", c.lost_b},
                       {"bias_sd", c.bias_sd},
                       {"bias_limit", c.bias_limit},
                       {"beta1", c.beta1},
                       {"beta2", c.beta2},
                       {"assumed_bias", c.assumed_bias ? nlohmann::json(*c.assumed_bias) : nlohmann::json()},
                       {"bfs_iterations", c.bfs_iterations},
                       {"bfs_depth", c.bfs_depth},
                       {"agent_gamma", c.agent_gamma}};
}

void from_json(const nlohmann::json& j, Config& c) {
    c.horizon = j.value("horizon", c.horizon);
    c.capacity = j.value("capacity", c.capacity);
    c.batch = j.value("batch", c.batch);
    c.gamma = j.value("gamma", c.gamma);
    c.demand_mu_mean = j.value("demand_mu_mean", c.demand_mu_mean);
    c.demand_mu_sd = j.value("demand_mu_sd", c.demand_mu_sd);
    c.demand_mu_hi = j.value("demand_mu_hi", c.demand_mu_hi);
    c.demand_sigma_dof = j.value("demand_sigma_dof", c.demand_sigma_dof);
    c.storage_a = j.value("storage_a", c.storage_a);
    c.storage_b = j.value("storage_b", c.storage_b);
    c.lost_a = j.value("lost_a", c.lost_a);
    c.lost_b = j.value("lost_b", c.lost_b);
    c.bias_sd = j.value("bias_sd", c.bias_sd);
    c.bias_limit = j.value("bias_limit", c.bias_limit);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    if (j.contains("assumed_bias") && !j["assumed_bias"].is_null()) c.assumed_bias = j["assumed_bias"].get<double>();
    c.bfs_iterations = j.value("bfs_iterations", c.bfs_iterations);
    c.bfs_depth = j.value("bfs_depth", c.bfs_depth);
    c.agent_gamma = j.value("agent_gamma", c.agent_gamma);
    if (c.horizon < 1 || c.capacity < 0 || c.batch < 1) throw std::invalid_argument("invalid inventory config");
}

void to_json(nlohmann::json& j, const Demand& d) { j = nlohmann::json{{"mu", d.mu}, {"sigma", d.sigma}}; }
void from_json(const nlohmann::json& j, Demand& d) {
    d.mu = j.at("mu").get<double>();
    d.sigma = j.at("sigma").get<double>();
}

Config Config::desk_scale() {
    Config c;
    c.horizon = 20;
    return c;
}

Schedule generate_schedule(const Config& cfg, std::uint64_t seed) {
    Rng rng(seed, Stream::instance);
    const TruncatedNormal mu{cfg.demand_mu_mean, cfg.demand_mu_sd, 0.0, cfg.demand_mu_hi};
    Schedule s(static_cast<std::size_t>(cfg.horizon));
    for (auto& step : s)
        for (auto& d : step) {
            d.mu = mu.sample(rng);
            d.sigma = sample_chi_squared(rng, cfg.demand_sigma_dof);
        }
    return s;
}

Omega decode_omega(const ParameterSample& p) {
    if (p.omega.size() != kProducts + 2) throw ContractViolation("inventory omega has wrong size");
    Omega w;
    for (int i = 0; i < kProducts; ++i) w.profit[static_cast<std::size_t>(i)] = p.omega[static_cast<std::size_t>(i)];
    w.storage = p.omega[kProducts];
    w.lost = p.omega[kProducts + 1];
    return w;
}

double decode_bias(const ParameterSample& p) {
    if (p.theta.size() != 3) throw ContractViolation("inventory theta has wrong size");
    return p.theta[0];
}

ParameterSample encode(const Omega& w, double bias, double beta1, double beta2) {
    ParameterSample p;
    p.omega.assign(w.profit.begin(), w.profit.end());
    p.omega.push_back(w.storage);
    p.omega.push_back(w.lost);
    p.theta = {bias, beta1, beta2};
    return p;
}

StepOutcome settle(const Levels& inventory, const Levels& production, const Levels& demand) {
    StepOutcome o;
    o.demand = demand;
    for (std::size_t i = 0; i < kProducts; ++i) {
        const int available = inventory[i] + production[i];
        o.sold[i] = std::min(available, demand[i]);
        o.lost[i] = demand[i] - o.sold[i];
        o.next[i] = available - o.sold[i];
    }
    return o;
}

double step_reward(const Levels& sold, const Levels& lost, const Levels& next, const Omega& w) {
    double r = 0.0;
    for (std::size_t i = 0; i < kProducts; ++i) r += w.profit[i] * sold[i] - w.storage * next[i] - w.lost * lost[i];
    return r;
}

Inventory::Inventory(Config cfg, Schedule schedule) : cfg_(cfg), schedule_(std::move(schedule)) {
    if (static_cast<int>(schedule_.size()) < cfg_.horizon) throw std::invalid_argument("demand schedule shorter than horizon");
    for (int a = 0; a <= cfg_.capacity; a += cfg_.batch)
        for (int b = 0; a + b <= cfg_.capacity; b += cfg_.batch)
            for (int c = 0; a + b + c <= cfg_.capacity; c += cfg_.batch) table_.push_back({a, b, c});
}

const Levels& Inventory::production(int a) const {
    if (a < 0 || a >= static_cast<int>(table_.size())) throw ContractViolation("inventory action out of range");
    return table_[static_cast<std::size_t>(a)];
}

int Inventory::action_of(const Levels& production) const {
    auto it = std::find(table_.begin(), table_.end(), production);
    if (it == table_.end()) throw ContractViolation("production must be even per product and within capacity");
    return static_cast<int>(it - table_.begin());
}

std::vector<int> Inventory::actions(const State& s) const {
    if (is_terminal(s)) return {};
    std::vector<int> out(table_.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
}

State Inventory::transition(const State& s, int a, Rng& rng) const {
    if (is_terminal(s)) throw ContractViolation("transition from a terminal inventory state");
    const Levels& p = production(a);
    Levels demand{};
    const auto& dist = schedule_[static_cast<std::size_t>(s.t)];
    for (std::size_t i = 0; i < kProducts; ++i) {
        // Always draw, so sigma = 0 does not shift later draws.
        const double z = rng.normal(0.0, 1.0);
        demand[i] = std::max(0, static_cast<int>(std::lround(dist[i].mu + dist[i].sigma * z)));
    }
    const StepOutcome o = settle(s.inventory, p, demand);
    return State{o.next, s.t + 1, o.sold, o.lost};
}

double Inventory::reward(const State&, int, const State& next, const ParameterSample& p) const {
    return step_reward(next.last_sold, next.last_lost, next.inventory, decode_omega(p));
}

std::uint64_t Inventory::digest(const State& s) const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(s.t));
    for (int v : s.inventory) h = hash_combine(h, static_cast<std::uint64_t>(v));
    return h;
}

double Inventory::demand_estimate(int t, int product, double bias) const {
    const Demand& d = schedule_[static_cast<std::size_t>(t)][static_cast<std::size_t>(product)];
    return std::max(0.0, d.mu + bias * d.sigma);
}

namespace {

// The agent's deterministic view: point-estimate demand, real-valued stock.
class AgentView {
public:
    struct State {
        std::array<double, kProducts> stock{};
        int t = 0;
    };

    AgentView(const Inventory& env, const Omega& w, double bias) : env_(&env), w_(w) {
        const int horizon = env.config().horizon;
        demand_.resize(static_cast<std::size_t>(horizon));
        for (int t = 0; t < horizon; ++t)
            for (int i = 0; i < kProducts; ++i)
                demand_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = env.demand_estimate(t, i, bias);
        bound_ = *std::max_element(w.profit.begin(), w.profit.end()) * env.config().capacity;
    }

    std::vector<int> actions(const State& s) const {
        if (s.t >= env_->config().horizon) return {};
        std::vector<int> out(env_->production_table().size());
        std::iota(out.begin(), out.end(), 0);
        return out;
    }

    std::pair<State, double> step(const State& s, int a) const {
        const Levels& p = env_->production(a);
        const auto& d = demand_[static_cast<std::size_t>(s.t)];
        State next{{}, s.t + 1};
        double r = 0.0;
        for (std::size_t i = 0; i < kProducts; ++i) {
            const double available = s.stock[i] + p[i];
            const double sold = std::min(available, d[i]);
            next.stock[i] = available - sold;
            r += w_.profit[i] * sold - w_.storage * next.stock[i] - w_.lost * (d[i] - sold);
        }
        return {next, r};
    }

    double discount() const { return env_->config().agent_gamma; }
    double reward_bound() const { return bound_; }
    bool is_leaf_action(int) const { return false; }

private:
    const Inventory* env_;
    Omega w_;
    std::vector<std::array<double, kProducts>> demand_;
    double bound_ = 0.0;
};

}  // namespace

QEstimate Inventory::agent_q(const State& s, const ParameterSample& p) const {
    const AgentView view(*this, decode_omega(p), decode_bias(p));
    AgentView::State root{{}, s.t};
    for (std::size_t i = 0; i < kProducts; ++i) root.stock[i] = s.inventory[i];
    return bfs_q_estimate(view, root, cfg_.bfs_iterations, cfg_.bfs_depth);
}

AgentParams Inventory::agent_params(const ParameterSample& p) const {
    if (p.theta.size() != 3) throw ContractViolation("inventory theta has wrong size");
    return {p.theta[1], p.theta[2]};
}

ParameterSample Inventory::sample_true_params(Rng& rng) const {
    Omega w;
    for (auto& v : w.profit) v = rng.uniform();
    w.profit[rng.index(kProducts)] = 1.0;
    w.storage = sample_beta(rng, cfg_.storage_a, cfg_.storage_b);
    w.lost = sample_beta(rng, cfg_.lost_a, cfg_.lost_b);
    const double bias = TruncatedNormal{0.0, cfg_.bias_sd, -cfg_.bias_limit, cfg_.bias_limit}.sample(rng);
    return encode(w, bias, cfg_.beta1, cfg_.beta2);
}

ParameterSample Inventory::sample_belief_particle(Rng& rng, std::optional<double> assumed_bias) const {
    ParameterSample p = sample_true_params(rng);
    if (assumed_bias) p.theta[0] = *assumed_bias;
    return p;
}

BeliefBinning Inventory::binning() const {
    BeliefBinning b;
    b.omega.assign(kProducts + 2, ParamBinning::continuous(0.0, 1.0));
    b.theta = {ParamBinning::continuous(-cfg_.bias_limit, cfg_.bias_limit), ParamBinning::categorical(),
               ParamBinning::categorical()};
    return b;
}

nlohmann::json Inventory::state_json(const State& s) const {
    nlohmann::json upcoming = nlohmann::json::array();
    if (!is_terminal(s)) upcoming = schedule_[static_cast<std::size_t>(s.t)];
    return {{"inventory", s.inventory}, {"t", s.t},          {"last_sold", s.last_sold},
            {"last_lost", s.last_lost}, {"demand", upcoming}, {"terminal", is_terminal(s)}};
}

State Inventory::state_from_json(const nlohmann::json& j) const {
    State s;
    s.inventory = j.at("inventory").get<Levels>();
    s.t = j.value("t", 0);
    if (j.contains("last_sold")) s.last_sold = j["last_sold"].get<Levels>();
    if (j.contains("last_lost")) s.last_lost = j["last_lost"].get<Levels>();
    for (int v : s.inventory)
        if (v < 0) throw std::invalid_argument("inventory levels must be non-negative");
    if (s.t < 0 || s.t > cfg_.horizon) throw std::invalid_argument("inventory step out of range");
    return s;
}

}  // namespace aiad::inventory
