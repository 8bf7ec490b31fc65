#include "aiad/planner.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>

using namespace aiad;
using namespace aiad::testing;

TEST_CASE("advice transitions marginalize the agent policy") {
    Rng rng(17);
    const auto d = ToyDomain::random(rng);
    AgentModel<ToyDomain> model(d);
    const auto p = random_toy_hypothesis(rng);
    const auto start = std::chrono::steady_clock::now();
    for (int s = 0; s < 3; ++s)
        for (int adv = 0; adv < 3; ++adv) {
            const auto pol = toy_policy(d, s, adv, p);
            std::array<double, 3> expect{};
            for (int a = 0; a < 3; ++a)
                for (int n = 0; n < 3; ++n)
                    expect[static_cast<std::size_t>(n)] += pol[static_cast<std::size_t>(a)] *
                                                           d.T[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)][static_cast<std::size_t>(n)];
            std::array<int, 3> counts{}, acts{};
            const int trials = 100000;
            Rng sim(static_cast<std::uint64_t>(s * 3 + adv));
            for (int i = 0; i < trials; ++i) {
                const auto step = sample_assistant_transition(d, &model, s, AssistantAction::advise(adv), p, sim);
                counts[static_cast<std::size_t>(step.next)]++;
                acts[static_cast<std::size_t>(step.env_action)]++;
            }
            for (std::size_t n = 0; n < 3; ++n) {
                const double sd = std::sqrt(expect[n] * (1 - expect[n]) / trials);
                CHECK(std::abs(counts[n] / double(trials) - expect[n]) <= 3 * sd + 1e-12);
                const double sa = std::sqrt(pol[n] * (1 - pol[n]) / trials);
                CHECK(std::abs(acts[n] / double(trials) - pol[n]) <= 3 * sa + 1e-12);
            }
        }
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 10.0);
}

TEST_CASE("act transitions bypass the agent") {
    Rng rng(2);
    const auto d = ToyDomain::random(rng);
    const auto p = random_toy_hypothesis(rng);
    Rng sim(1);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_assistant_transition<ToyDomain>(d, nullptr, 0, AssistantAction::act(2), p, sim).env_action == 2);
    CHECK_THROWS_AS(sample_assistant_transition<ToyDomain>(d, nullptr, 0, AssistantAction::advise(2), p, sim),
                    ContractViolation);
}

namespace {

struct Instance {
    ToyDomain d;
    std::vector<ParameterSample> hyps;
    std::vector<double> w;
    std::vector<double> q;
};

// Draws instances whose best root action beats the runner-up by `gap`, so
// that a finite Monte Carlo budget can separate them.
Instance draw_instance(Rng& rng, double gap) {
    for (;;) {
        Instance in;
        in.d = ToyDomain::random(rng, 2);
        in.hyps = {random_toy_hypothesis(rng), random_toy_hypothesis(rng)};
        const double w0 = rng.uniform(0.2, 0.8);
        in.w = {w0, 1.0 - w0};
        exact_ba_value(in.d, 0, in.hyps, in.w, 2, &in.q);
        auto sorted = in.q;
        std::sort(sorted.rbegin(), sorted.rend());
        if (sorted[0] - sorted[1] >= gap) return in;
    }
}

}  // namespace

TEST_CASE("root choice agrees with exact Bayes-adaptive value iteration") {
    Rng rng(99);
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < 10; ++k) {
        const auto in = draw_instance(rng, 0.05);
        AgentModel<ToyDomain> model(in.d);
        ParticleBelief belief(in.hyps, in.w);
        PlannerConfig cfg;
        cfg.gamma = in.d.gamma;
        cfg.max_depth = 2;
        cfg.n_iterations = 50000;
        cfg.c = 1.0;
        cfg.subsample = 0;
        Ghpmcp<ToyDomain> planner(in.d, &model, cfg, ActionSpace::advice_only());
        const auto res = planner.plan(0, belief, static_cast<std::uint64_t>(k));
        const auto best = static_cast<int>(std::max_element(in.q.begin(), in.q.end()) - in.q.begin());
        CHECK(res.action == AssistantAction::advise(best));
        CHECK(planner.tree().size() <= 50);
        for (std::size_t i = 0; i < 3; ++i) CHECK(res.root_q[i] == doctest::Approx(in.q[i]).epsilon(0.05));
    }
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 60.0);
}

TEST_CASE("planning is deterministic per seed and respects the time cap") {
    Rng rng(5);
    const auto in = draw_instance(rng, 0.0);
    AgentModel<ToyDomain> model(in.d);
    ParticleBelief belief(in.hyps, in.w);
    PlannerConfig cfg;
    cfg.n_iterations = 3000;
    Ghpmcp<ToyDomain> a(in.d, &model, cfg, ActionSpace::advice_only());
    Ghpmcp<ToyDomain> b(in.d, &model, cfg, ActionSpace::advice_only());
    const auto ra = a.plan(0, belief, 12), rb = b.plan(0, belief, 12);
    CHECK(ra.root_q == rb.root_q);
    CHECK(ra.root_counts == rb.root_counts);
    CHECK(ra.iterations == 3000);

    cfg.n_iterations = 100000000;
    cfg.time_limit_seconds = 0.05;
    Ghpmcp<ToyDomain> capped(in.d, &model, cfg, ActionSpace::advice_only());
    const auto rc = capped.plan(0, belief, 1);
    CHECK(rc.iterations < 100000000);
    CHECK(rc.seconds < 1.0);

    cfg.n_iterations = 2;
    Ghpmcp<ToyDomain> tiny(in.d, &model, cfg, ActionSpace::advice_only());
    CHECK_THROWS_AS(tiny.plan(0, belief, 1), ContractViolation);
}

TEST_CASE("assistant action spaces") {
    Rng rng(1);
    const auto d = ToyDomain::random(rng);
    CHECK(assistant_actions(d, 0, ActionSpace::advice_only()).size() == 3);
    CHECK(assistant_actions(d, 0, ActionSpace::advice_and_automation()).size() == 6);
    const auto partial = assistant_actions(d, 0, ActionSpace::partial_automation());
    CHECK(partial.size() == 4);
    CHECK(partial.back() == AssistantAction::yield());
}

TEST_CASE("automation with a point-mass belief finds the best action") {
    ToyDomain d;
    for (auto& per_state : d.T)
        for (auto& row : per_state) row = {1.0, 0.0, 0.0};
    ParameterSample p;
    p.omega = {0.1, 0.9, 0.3, 0, 0, 0, 0, 0, 0};
    p.theta = {1.0, 1.0};
    ParticleBelief point({p}, {1.0});
    PlannerConfig cfg;
    cfg.n_iterations = 2000;
    cfg.c = 1.0;
    CHECK(automation_plan(d, 0, point, cfg, 3) == 1);
}
