#include "aiad/service.hpp"

#include "aiad/daytrip/daytrip.hpp"
#include "aiad/inventory/inventory.hpp"
#include "aiad/planner.hpp"

#include <algorithm>
#include <mutex>
#include <optional>

namespace aiad::service {

namespace {

nlohmann::json belief_common(const ParticleBelief& b, const BeliefBinning& bins) {
    return {{"entropy", posterior_entropy(b, bins)},
            {"weight_entropy", weight_entropy(b.weights())},
            {"mean_omega", b.mean_omega()},
            {"mean_theta", b.mean_theta()},
            {"degenerate_updates", b.degenerate_updates()}};
}

struct DaytripSide {
    using D = daytrip::Daytrip;
    static constexpr const char* name = "daytrip";

    static PlannerConfig planner() { return {0.95, 2, 5000, 0.1, 100, 2.0}; }
    static std::size_t particles() { return 1024; }

    static std::unique_ptr<D> make(const nlohmann::json& config, std::uint64_t seed, const nlohmann::json& instance) {
        daytrip::Config cfg;
        cfg.bfs_iterations = 150;
        nlohmann::json merged = cfg;
        merged.update(config);
        cfg = merged.get<daytrip::Config>();
        auto pois = instance.contains("pois") ? daytrip::pois_from_json(instance["pois"]) : daytrip::generate_pois(cfg, seed);
        return std::make_unique<D>(cfg, std::move(pois));
    }
    static nlohmann::json config(const D& env) { return env.config(); }
    static nlohmann::json instance(const D& env) { return {{"pois", daytrip::pois_to_json(env.pois())}}; }

    static int parse_action(const D& env, const nlohmann::json& a) {
        if (a.is_string() && a.get<std::string>() == "noop") return *env.noop_action();
        if (!a.is_number_integer()) throw ServiceError(400, "action must be a POI index or \"noop\"");
        const int i = a.get<int>();
        if (i < 0 || i > env.n_pois()) throw ServiceError(422, "POI index out of range");
        return i;
    }
    static std::string illegal_reason(const D& env, const D::State& s, int a) {
        if (env.is_add(s, a) && env.over_duration(s))
            return "the trip already takes more than 12 hours; only removals are allowed";
        return "action is not available in this state";
    }
    static bool finishes(const D& env, const D::State&, int a) { return a == *env.noop_action(); }

    static nlohmann::json describe_action(const D& env, const D::State& s, int a) {
        if (a == *env.noop_action()) return {{"action", a}, {"kind", "noop"}};
        return {{"action", a}, {"kind", s.contains(a) ? "remove" : "add"}, {"poi", a}};
    }

    static nlohmann::json state_view(const D& env, const D::State& s, const ParticleBelief& b) {
        nlohmann::json v = env.state_json(s);
        double est = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) est += b.weight(i) * env.objective(s, b.particle(i));
        v["estimated_objective"] = est;
        return v;
    }
    static nlohmann::json belief_view(const D& env, const ParticleBelief& b) {
        nlohmann::json v = belief_common(b, env.binning());
        const auto mean = b.mean_omega();
        const auto n = static_cast<std::size_t>(env.config().n_topics);
        v["topic_interest"] = std::vector<double>(mean.begin(), mean.begin() + static_cast<long>(n));
        v["mu_c"] = mean[n];
        v["anchoring_probability"] = b.mean_theta()[0];
        return v;
    }
    static nlohmann::json compact(const D::State& s) { return s.indices(); }
    static D::State from_compact(const D& env, const nlohmann::json& j) { return env.state_from_json(j); }
    static PriorSampler sampler(const D& env) {
        return [&env](Rng& rng) { return env.sample_belief_particle(rng); };
    }
};

struct InventorySide {
    using D = inventory::Inventory;
    static constexpr const char* name = "inventory";

    static PlannerConfig planner() { return {0.99, 4, 5000, 10.0, 200, 2.0}; }
    static std::size_t particles() { return 2048; }

    static std::unique_ptr<D> make(const nlohmann::json& config, std::uint64_t seed, const nlohmann::json& instance) {
        auto cfg = inventory::Config::desk_scale();
        from_json(config, cfg);
        auto schedule = instance.contains("schedule") ? instance["schedule"].get<inventory::Schedule>()
                                                      : inventory::generate_schedule(cfg, seed);
        return std::make_unique<D>(cfg, std::move(schedule));
    }
    static nlohmann::json config(const D& env) { return env.config(); }
    static nlohmann::json instance(const D& env) { return {{"schedule", env.schedule()}}; }

    static int parse_action(const D& env, const nlohmann::json& a) {
        if (a.is_object() && a.contains("production")) {
            try {
                return env.action_of(a["production"].get<inventory::Levels>());
            } catch (const ContractViolation& e) {
                throw ServiceError(422, e.what());
            }
        }
        if (!a.is_number_integer()) throw ServiceError(400, "action must be an id or {production: [p1, p2, p3]}");
        const int i = a.get<int>();
        if (i < 0 || i >= static_cast<int>(env.production_table().size())) throw ServiceError(422, "action id out of range");
        return i;
    }
    static std::string illegal_reason(const D&, const D::State&, int) { return "the episode is over"; }
    static bool finishes(const D& env, const D::State& next, int) { return env.is_terminal(next); }

    static nlohmann::json describe_action(const D& env, const D::State&, int a) {
        return {{"action", a}, {"production", env.production(a)}};
    }
    static nlohmann::json state_view(const D& env, const D::State& s, const ParticleBelief&) { return env.state_json(s); }
    static nlohmann::json belief_view(const D& env, const ParticleBelief& b) {
        nlohmann::json v = belief_common(b, env.binning());
        const auto mean = b.mean_omega();
        v["profit"] = std::vector<double>(mean.begin(), mean.begin() + inventory::kProducts);
        v["storage_cost"] = mean[inventory::kProducts];
        v["lost_cost"] = mean[inventory::kProducts + 1];
        v["bias"] = b.mean_theta()[0];
        return v;
    }
    static nlohmann::json compact(const D::State& s) {
        return {{"inventory", s.inventory}, {"t", s.t}, {"last_sold", s.last_sold}, {"last_lost", s.last_lost}};
    }
    static D::State from_compact(const D& env, const nlohmann::json& j) { return env.state_from_json(j); }
    static PriorSampler sampler(const D& env) {
        return [&env](Rng& rng) { return env.sample_belief_particle(rng); };
    }
};

}  // namespace

// Writers hold `write_`; readers only touch the published view, so a long
// replan never blocks GET requests.
class Session {
public:
    virtual ~Session() = default;
    virtual nlohmann::json submit(const nlohmann::json& request) = 0;
    virtual nlohmann::json finish() = 0;
    virtual nlohmann::json snapshot(bool full) const = 0;

    nlohmann::json view() const {
        std::lock_guard lock(view_mutex_);
        return view_;
    }

protected:
    void publish(nlohmann::json v) {
        std::lock_guard lock(view_mutex_);
        view_ = std::move(v);
    }
    mutable std::mutex write_;

private:
    mutable std::mutex view_mutex_;
    nlohmann::json view_;
};

namespace {

template <class Side>
class DomainSession final : public Session {
public:
    using D = typename Side::D;
    using State = typename D::State;

    DomainSession(std::string id, const nlohmann::json& request)
        : id_(std::move(id)),
          seed_(request.value("seed", std::uint64_t{1})),
          env_(Side::make(request.value("config", nlohmann::json::object()), seed_,
                          request.value("instance", nlohmann::json::object()))),
          model_(*env_) {
        planner_ = Side::planner();
        if (request.contains("planner")) from_json(request["planner"], planner_);
        const std::size_t particles = request.value("particles", Side::particles());
        if (particles < 1) throw ServiceError(400, "particles must be >= 1");
        if (request.contains("belief_state")) {
            belief_ = ParticleBelief::from_snapshot(request["belief_state"]);
            state_ = Side::from_compact(*env_, request.at("state"));
            log_ = request.value("log", nlohmann::json::array());
            plans_ = request.value("plans", 0);
            done_ = request.value("status", std::string("active")) == "done";
            if (request.contains("advice") && !request["advice"].is_null()) advice_ = request["advice"].get<int>();
        } else {
            belief_ = init_belief(Side::sampler(*env_), particles, seed_);
            state_ = env_->initial_state();
            log_ = nlohmann::json::array();
            replan();
        }
        publish(snapshot(false));
    }

    nlohmann::json submit(const nlohmann::json& request) override {
        std::lock_guard lock(write_);
        if (done_) throw ServiceError(409, "session is finished");
        if (!request.contains("action")) throw ServiceError(400, "missing action");
        const int a = Side::parse_action(*env_, request["action"]);
        const auto legal = env_->actions(state_);
        if (std::find(legal.begin(), legal.end(), a) == legal.end())
            throw ServiceError(422, Side::illegal_reason(*env_, state_, a));

        const State prev = state_;
        Rng rng(seed_, Stream::environment, log_.size());
        const State next = env_->transition(state_, a, rng);
        belief_.update([&](const ParameterSample& p) { return model_.likelihood(prev, advice_, a, p); });
        double est_reward = 0.0;
        for (std::size_t i = 0; i < belief_.size(); ++i)
            est_reward += belief_.weight(i) * env_->reward(prev, a, next, belief_.particle(i));
        nlohmann::json entry{{"step", log_.size()},
                             {"state", Side::compact(prev)},
                             {"advice", advice_ ? nlohmann::json(*advice_) : nlohmann::json()},
                             {"action", a},
                             {"accepted", advice_ && *advice_ == a},
                             {"next_state", Side::compact(next)},
                             {"estimated_reward", est_reward}};
        log_.push_back(entry);
        state_ = next;
        if (Side::finishes(*env_, next, a)) done_ = true;
        replan();
        nlohmann::json snap = snapshot(false);
        publish(snap);
        snap["result"] = entry;
        return snap;
    }

    nlohmann::json finish() override {
        std::lock_guard lock(write_);
        done_ = true;
        advice_.reset();
        publish(snapshot(false));
        return view();
    }

    nlohmann::json snapshot(bool full) const override {
        nlohmann::json j{{"version", kApiVersion},
                         {"id", id_},
                         {"domain", Side::name},
                         {"seed", seed_},
                         {"status", done_ ? "done" : "active"},
                         {"config", Side::config(*env_)},
                         {"planner", planner_},
                         {"instance", Side::instance(*env_)},
                         {"state", Side::state_view(*env_, state_, belief_)},
                         {"advice", advice_ ? Side::describe_action(*env_, state_, *advice_) : nlohmann::json()},
                         {"belief", Side::belief_view(*env_, belief_)},
                         {"log", log_}};
        if (full) {
            j["compact_state"] = Side::compact(state_);
            j["belief_state"] = belief_.snapshot();
            j["plans"] = plans_;
            j["advice_action"] = advice_ ? nlohmann::json(*advice_) : nlohmann::json();
        }
        return j;
    }

private:
    void replan() {
        advice_.reset();
        if (done_ || env_->is_terminal(state_)) {
            done_ = true;
            return;
        }
        Ghpmcp<D> planner(*env_, &model_, planner_, ActionSpace::advice_only());
        const auto res = planner.plan(state_, belief_, derive_seed(seed_, Stream::planner, static_cast<std::uint64_t>(plans_++)));
        advice_ = res.action.action;
    }

    std::string id_;
    std::uint64_t seed_;
    std::unique_ptr<D> env_;
    AgentModel<D> model_;
    PlannerConfig planner_;
    ParticleBelief belief_;
    State state_{};
    std::optional<int> advice_;
    nlohmann::json log_;
    int plans_ = 0;
    bool done_ = false;
};

std::shared_ptr<Session> make_session(const std::string& id, const nlohmann::json& request) {
    const std::string domain = request.value("domain", std::string("daytrip"));
    try {
        if (domain == "daytrip") return std::make_shared<DomainSession<DaytripSide>>(id, request);
        if (domain == "inventory") return std::make_shared<DomainSession<InventorySide>>(id, request);
    } catch (const ServiceError&) {
        throw;
    } catch (const std::exception& e) {
        throw ServiceError(400, std::string("invalid session config: ") + e.what());
    }
    throw ServiceError(400, "unknown domain: " + domain);
}

}  // namespace

SessionStore::SessionStore() = default;
SessionStore::~SessionStore() = default;

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "no session " + id);
    return it->second;
}

nlohmann::json SessionStore::create(const nlohmann::json& request) {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    if (request.contains("belief_state")) throw ServiceError(400, "use restore for full snapshots");
    std::string id;
    {
        std::unique_lock lock(mutex_);
        id = "s" + std::to_string(next_id_++);
    }
    auto session = make_session(id, request);
    {
        std::unique_lock lock(mutex_);
        sessions_.emplace(id, session);
    }
    return session->view();
}

nlohmann::json SessionStore::get(const std::string& id, bool full) const {
    auto s = find(id);
    return full ? s->snapshot(true) : s->view();
}

nlohmann::json SessionStore::submit(const std::string& id, const nlohmann::json& request) {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    return find(id)->submit(request);
}

nlohmann::json SessionStore::advice(const std::string& id) const {
    const auto v = find(id)->view();
    return {{"version", kApiVersion}, {"id", id}, {"status", v["status"]}, {"advice", v["advice"]}, {"belief", v["belief"]}};
}

nlohmann::json SessionStore::finish(const std::string& id) { return find(id)->finish(); }

nlohmann::json SessionStore::restore(const nlohmann::json& snap) {
    if (!snap.contains("belief_state") || !snap.contains("id")) throw ServiceError(400, "restore needs a full snapshot");
    nlohmann::json request = snap;
    request["state"] = snap.at("compact_state");
    request["advice"] = snap.value("advice_action", nlohmann::json());
    const std::string id = snap["id"].get<std::string>();
    auto session = make_session(id, request);
    std::unique_lock lock(mutex_);
    if (sessions_.count(id)) throw ServiceError(409, "session " + id + " already exists");
    sessions_.emplace(id, session);
    return session->view();
}

std::vector<std::string> SessionStore::ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace aiad::service
