#pragma once

// Interaction protocols that couple a (simulated) agent, an assistant, the
// belief and the environment for one episode.

#include "aiad/agent_model.hpp"
#include "aiad/belief.hpp"
#include "aiad/decision.hpp"
#include "aiad/planner.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace aiad {

enum class ModeKind { aiad, aiad_automation, unassisted, irl_automation, pl_automation, partial_automation, oracle };

std::string to_string(ModeKind k);
ModeKind mode_kind_from_string(const std::string& s);

struct ModeConfig {
    ModeKind kind = ModeKind::aiad;
    PlannerConfig planner;     // GHPMCP for the advising modes
    PlannerConfig automation;  // MCTS for the automating modes
    /// Stop once this many interactions have happened; < 0 means no cap.
    int budget = -1;
    /// Hard cap on logged steps of any kind.
    int max_steps = 200;
    int irl_demos = 0;
    int pl_queries = 0;
    int pl_pool = 100;
    /// Return to the initial state before automation takes over (free in design problems).
    bool reset_before_automation = false;
};

/// Expected reduction in weight entropy from asking a binary question whose
/// "first" answer has probability p_first[i] under particle i.
double expected_information_gain(const std::vector<double>& weights, const std::vector<double>& p_first);

template <class D>
struct RunContext {
    const D* env = nullptr;
    const AgentModel<D>* model = nullptr;
    ParameterSample truth;
    ParticleBelief belief;
    BeliefBinning binning;
    std::uint64_t seed = 0;
};

template <class State>
struct RunOutput {
    Trajectory<State> trajectory;
    /// Planner statistics; contains timings, so kept apart from the trajectory.
    std::vector<nlohmann::json> telemetry;
    ParticleBelief belief;
    int belief_updates = 0;
};

template <class D>
concept HasObjective = requires(const D& d, const typename D::State& s, const ParameterSample& p) {
    { d.objective(s, p) } -> std::convertible_to<double>;
};

template <class D>
concept QueryDomain = HasObjective<D> && requires(const D& d, Rng& rng) {
    { d.random_trip(rng) } -> std::same_as<typename D::State>;
};

/// One episode of a protocol. Not reusable; construct one per run and mode.
template <PlanningDomain D>
class EpisodeRunner {
public:
    using State = typename D::State;
    using Record = InteractionRecord<State>;

    EpisodeRunner(RunContext<D> ctx, ModeConfig cfg) : ctx_(std::move(ctx)), cfg_(std::move(cfg)) {
        if (!ctx_.env || !ctx_.model) throw ContractViolation("EpisodeRunner needs an environment and an agent model");
        if (cfg_.max_steps < 0) throw ContractViolation("max_steps must be non-negative");
        state_ = ctx_.env->initial_state();
        out_.trajectory.seed = ctx_.seed;
    }

    RunOutput<State> run() {
        switch (cfg_.kind) {
            case ModeKind::aiad: advising_loop(ActionSpace::advice_only()); break;
            case ModeKind::aiad_automation: advising_loop(ActionSpace::advice_and_automation()); break;
            case ModeKind::partial_automation: advising_loop(ActionSpace::partial_automation()); break;
            case ModeKind::unassisted: unassisted_loop(); break;
            case ModeKind::irl_automation: irl(); break;
            case ModeKind::pl_automation: pl(); break;
            case ModeKind::oracle: oracle(); break;
        }
        out_.belief = ctx_.belief;
        return std::move(out_);
    }

private:
    bool budget_left() const { return cfg_.budget < 0 || interactions_ < cfg_.budget; }
    bool steps_left() const { return static_cast<int>(out_.trajectory.records.size()) < cfg_.max_steps; }
    bool live() const { return !ctx_.env->is_terminal(state_) && steps_left(); }
    std::uint64_t step_index() const { return out_.trajectory.records.size(); }

    State env_step(int a) {
        Rng rng(ctx_.seed, Stream::environment, env_steps_++);
        return ctx_.env->transition(state_, a, rng);
    }

    void log(Record rec) {
        rec.interactions = interactions_;
        rec.reward = rec.kind == StepKind::query || rec.kind == StepKind::reset
                         ? 0.0
                         : ctx_.env->reward(rec.state, *rec.action, rec.next_state, ctx_.truth);
        if (rec.kind != StepKind::query && rec.kind != StepKind::reset) {
            return_ += discount_ * rec.reward;
            discount_ *= ctx_.env->discount();
        }
        rec.discounted_return = return_;
        if constexpr (HasObjective<D>) rec.objective = ctx_.env->objective(rec.next_state, ctx_.truth);
        rec.entropy = posterior_entropy(ctx_.belief, ctx_.binning);
        rec.reward_error = reward_error(ctx_.belief, ctx_.truth.omega);
        out_.trajectory.records.push_back(std::move(rec));
    }

    void update_belief(const State& s, std::optional<int> advice, int action) {
        ctx_.belief.update([&](const ParameterSample& p) { return ctx_.model->likelihood(s, advice, action, p); });
        ++out_.belief_updates;
    }

    // The simulated agent moves, optionally under advice; the assistant observes it.
    void agent_move(std::optional<int> advice, bool observe) {
        Rng rng(ctx_.seed, Stream::agent, step_index());
        const int a = ctx_.model->sample(state_, advice, ctx_.truth, rng);
        Record rec;
        rec.kind = advice ? StepKind::advise : StepKind::agent;
        rec.state = state_;
        rec.advice = advice;
        rec.action = a;
        if (advice) rec.accepted = (a == *advice);
        rec.next_state = env_step(a);
        if (observe) update_belief(state_, advice, a);
        ++interactions_;
        state_ = rec.next_state;
        log(std::move(rec));
    }

    void assistant_act(int a) {
        Record rec;
        rec.kind = StepKind::act;
        rec.state = state_;
        rec.action = a;
        rec.next_state = env_step(a);
        state_ = rec.next_state;
        log(std::move(rec));
    }

    std::uint64_t plan_seed() const { return derive_seed(ctx_.seed, Stream::planner, step_index()); }

    void advising_loop(const ActionSpace& space) {
        Ghpmcp<D> planner(*ctx_.env, ctx_.model, cfg_.planner, space);
        while (live() && budget_left()) {
            const PlanResult res = planner.plan(state_, ctx_.belief, plan_seed());
            out_.telemetry.push_back(res.telemetry());
            switch (res.action.kind) {
                case AssistKind::advise: agent_move(res.action.action, true); break;
                case AssistKind::yield: agent_move(std::nullopt, true); break;
                case AssistKind::act: assistant_act(res.action.action); break;
            }
        }
    }

    void unassisted_loop() {
        while (live() && budget_left()) agent_move(std::nullopt, false);
    }

    void automate(const ParticleBelief& belief) {
        const auto noop = ctx_.env->noop_action();
        while (live()) {
            PlanResult res;
            automation_plan(*ctx_.env, state_, belief, cfg_.automation, plan_seed(), &res);
            out_.telemetry.push_back(res.telemetry());
            if (noop && res.action.action == *noop) break;
            assistant_act(res.action.action);
        }
    }

    void reset() {
        Record rec;
        rec.kind = StepKind::reset;
        rec.state = state_;
        rec.next_state = ctx_.env->initial_state();
        state_ = rec.next_state;
        return_ = 0.0;
        discount_ = 1.0;
        log(std::move(rec));
    }

    void irl() {
        for (int k = 0; k < cfg_.irl_demos && live(); ++k) agent_move(std::nullopt, true);
        if (cfg_.reset_before_automation && !(state_ == ctx_.env->initial_state())) reset();
        automate(ctx_.belief);
    }

    void oracle() { automate(ParticleBelief({ctx_.truth}, {1.0})); }

    void pl() {
        if constexpr (QueryDomain<D>) {
            for (int k = 0; k < cfg_.pl_queries && steps_left(); ++k) query(k);
            automate(ctx_.belief);
        } else {
            throw ContractViolation("preference queries are not supported by this domain");
        }
    }

    void query(int k) requires QueryDomain<D> {
        const D& env = *ctx_.env;
        Rng rng(ctx_.seed, Stream::query, static_cast<std::uint64_t>(k));
        const auto& belief = ctx_.belief;
        auto p_first = [&](const State& a, const State& b, const ParameterSample& p) {
            return logistic(env.agent_params(p).beta1 * (env.objective(a, p) - env.objective(b, p)));
        };
        State best_a{}, best_b{};
        double best_gain = -1.0;
        std::vector<double> probs(belief.size());
        for (int c = 0; c < cfg_.pl_pool; ++c) {
            const State a = env.random_trip(rng);
            const State b = env.random_trip(rng);
            for (std::size_t i = 0; i < belief.size(); ++i) probs[i] = p_first(a, b, belief.particle(i));
            const double gain = expected_information_gain(belief.weights(), probs);
            if (gain > best_gain) {
                best_gain = gain;
                best_a = a;
                best_b = b;
            }
        }
        const bool first = rng.uniform() < p_first(best_a, best_b, ctx_.truth);
        ctx_.belief.update([&](const ParameterSample& p) {
            const double q = p_first(best_a, best_b, p);
            return first ? q : 1.0 - q;
        });
        ++out_.belief_updates;
        ++interactions_;
        Record rec;
        rec.kind = StepKind::query;
        rec.state = best_a;
        rec.next_state = best_b;
        rec.action = first ? 0 : 1;
        rec.extra = {{"expected_information_gain", best_gain}};
        // The design itself is untouched by a query.
        const State keep = state_;
        log(std::move(rec));
        state_ = keep;
    }

    RunContext<D> ctx_;
    ModeConfig cfg_;
    State state_;
    RunOutput<State> out_;
    int interactions_ = 0;
    std::uint64_t env_steps_ = 0;
    double return_ = 0.0;
    double discount_ = 1.0;
};

template <PlanningDomain D>
RunOutput<typename D::State> run_mode(RunContext<D> ctx, const ModeConfig& cfg) {
    return EpisodeRunner<D>(std::move(ctx), cfg).run();
}

}  // namespace aiad
