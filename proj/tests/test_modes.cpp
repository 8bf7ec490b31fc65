#include "aiad/daytrip/daytrip.hpp"
#include "aiad/modes.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace aiad;
using namespace aiad::testing;

namespace {

struct ToyRun {
    ToyDomain d;
    AgentModel<ToyDomain> model;
    ParameterSample truth;
    std::vector<ParameterSample> hyps;

    explicit ToyRun(std::uint64_t seed) : d(make(seed)), model(d) {
        Rng rng(seed, Stream::true_params);
        for (int i = 0; i < 8; ++i) hyps.push_back(random_toy_hypothesis(rng));
        truth = hyps[3];
    }
    static ToyDomain make(std::uint64_t seed) {
        Rng rng(seed);
        return ToyDomain::random(rng);
    }
    RunContext<ToyDomain> ctx(std::uint64_t seed) const {
        RunContext<ToyDomain> c;
        c.env = &d;
        c.model = &model;
        c.truth = truth;
        c.belief = ParticleBelief(hyps, std::vector<double>(hyps.size(), 1.0));
        c.binning = BeliefBinning{std::vector<ParamBinning>(9, ParamBinning::categorical()),
                                  {ParamBinning::categorical(), ParamBinning::categorical()}};
        c.seed = seed;
        return c;
    }
};

ModeConfig mode(ModeKind k, int budget = 6) {
    ModeConfig m;
    m.kind = k;
    m.budget = budget;
    m.max_steps = 30;
    m.planner.n_iterations = 300;
    m.automation.n_iterations = 300;
    return m;
}

}  // namespace

TEST_CASE("AIAD logs advised agent moves within the budget") {
    ToyRun toy(1);
    const auto out = run_mode(toy.ctx(5), mode(ModeKind::aiad));
    const auto& recs = out.trajectory.records;
    REQUIRE(recs.size() == 6);
    double ret = 0.0, disc = 1.0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].kind == StepKind::advise);
        CHECK(recs[i].accepted == (recs[i].action == recs[i].advice));
        CHECK(recs[i].interactions == static_cast<int>(i) + 1);
        ret += disc * recs[i].reward;
        disc *= toy.d.gamma;
        CHECK(recs[i].discounted_return == doctest::Approx(ret));
        if (i > 0) CHECK(recs[i].state == recs[i - 1].next_state);
    }
    CHECK(out.belief_updates == 6);
    CHECK(out.telemetry.size() == 6);

    // Replaying the observations through the same updater gives the same belief.
    auto b = toy.ctx(5).belief;
    for (const auto& r : recs)
        b.update([&](const ParameterSample& p) { return toy.model.likelihood(r.state, r.advice, *r.action, p); });
    CHECK(b.weights() == out.belief.weights());

    const auto again = run_mode(toy.ctx(5), mode(ModeKind::aiad));
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(again.trajectory.records[i].action == recs[i].action);
        CHECK(again.trajectory.records[i].advice == recs[i].advice);
    }
}

TEST_CASE("unassisted agents act on their own and the belief stays put") {
    ToyRun toy(2);
    const auto out = run_mode(toy.ctx(1), mode(ModeKind::unassisted));
    CHECK(out.trajectory.records.size() == 6);
    for (const auto& r : out.trajectory.records) {
        CHECK(r.kind == StepKind::agent);
        CHECK_FALSE(r.advice);
        CHECK_FALSE(r.accepted);
    }
    CHECK(out.belief_updates == 0);
    CHECK(out.belief.weights() == toy.ctx(1).belief.weights());
}

TEST_CASE("oracle automation acts without interactions") {
    ToyRun toy(3);
    auto m = mode(ModeKind::oracle);
    m.max_steps = 7;
    const auto out = run_mode(toy.ctx(2), m);
    CHECK(out.trajectory.records.size() == 7);
    for (const auto& r : out.trajectory.records) {
        CHECK(r.kind == StepKind::act);
        CHECK(r.interactions == 0);
    }
}

TEST_CASE("IRL observes demonstrations before automating") {
    ToyRun toy(4);
    auto m = mode(ModeKind::irl_automation);
    m.irl_demos = 3;
    m.max_steps = 8;
    const auto out = run_mode(toy.ctx(9), m);
    const auto& recs = out.trajectory.records;
    REQUIRE(recs.size() == 8);
    for (int i = 0; i < 3; ++i) CHECK(recs[static_cast<std::size_t>(i)].kind == StepKind::agent);
    for (std::size_t i = 3; i < 8; ++i) CHECK(recs[i].kind == StepKind::act);
    CHECK(out.belief_updates == 3);
    auto b = toy.ctx(9).belief;
    for (int i = 0; i < 3; ++i) {
        const auto& r = recs[static_cast<std::size_t>(i)];
        b.update([&](const ParameterSample& p) { return toy.model.likelihood(r.state, std::nullopt, *r.action, p); });
    }
    CHECK(b.weights() == out.belief.weights());
}

TEST_CASE("partial automation and AIAD+automation use their own action spaces") {
    ToyRun toy(5);
    for (auto k : {ModeKind::partial_automation, ModeKind::aiad_automation}) {
        auto m = mode(k, 4);
        const auto out = run_mode(toy.ctx(3), m);
        int agent_moves = 0;
        for (const auto& r : out.trajectory.records) {
            if (k == ModeKind::partial_automation) CHECK(r.kind != StepKind::advise);
            if (k == ModeKind::aiad_automation) CHECK((r.kind == StepKind::advise || r.kind == StepKind::act));
            agent_moves += r.kind == StepKind::act ? 0 : 1;
        }
        CHECK(agent_moves <= 4);
        CHECK(out.belief_updates == agent_moves);
    }
}

TEST_CASE("expected information gain") {
    CHECK(expected_information_gain({0.5, 0.5}, {0.3, 0.3}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(expected_information_gain({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(std::log(2.0)));
    CHECK(expected_information_gain({0.5, 0.5}, {0.9, 0.1}) > expected_information_gain({0.5, 0.5}, {0.6, 0.4}));
}

TEST_CASE("day-trip IRL resets the design and PL asks queries") {
    daytrip::Config cfg;
    cfg.n_pois = 8;
    cfg.n_topics = 4;
    cfg.bfs_iterations = 40;
    daytrip::Daytrip env(cfg, daytrip::generate_pois(cfg, 3));
    AgentModel<daytrip::Daytrip> model(env);
    Rng rng(1);
    RunContext<daytrip::Daytrip> ctx;
    ctx.env = &env;
    ctx.model = &model;
    ctx.truth = env.sample_true_params(rng, false);
    ctx.belief = init_belief([&](Rng& r) { return env.sample_belief_particle(r); }, 64, 2);
    ctx.binning = env.binning();
    ctx.seed = 11;

    auto m = mode(ModeKind::irl_automation);
    m.irl_demos = 4;
    m.reset_before_automation = true;
    const auto irl = run_mode(ctx, m);
    bool saw_reset = false;
    for (const auto& r : irl.trajectory.records) {
        if (r.kind == StepKind::reset) {
            saw_reset = true;
            CHECK(r.next_state == env.initial_state());
            CHECK(r.discounted_return == 0.0);
        }
        if (r.kind == StepKind::act) CHECK(r.action != env.noop_action());
    }
    if (!(irl.trajectory.records[3].next_state == env.initial_state())) CHECK(saw_reset);

    m = mode(ModeKind::pl_automation);
    m.pl_queries = 3;
    m.pl_pool = 10;
    const auto pl = run_mode(ctx, m);
    for (int i = 0; i < 3; ++i) {
        const auto& r = pl.trajectory.records[static_cast<std::size_t>(i)];
        CHECK(r.kind == StepKind::query);
        CHECK(r.interactions == i + 1);
        CHECK(r.reward == 0.0);
        CHECK(r.extra.contains("expected_information_gain"));
    }
    CHECK(pl.belief_updates == 3);
}
