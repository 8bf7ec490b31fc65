#include "aiad/daytrip/daytrip.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace aiad;
using namespace aiad::daytrip;

namespace {

Poi poi(double x, double y, double cost, double duration, std::uint32_t topics) {
    Poi p;
    p.x = x;
    p.y = y;
    p.cost = cost;
    p.duration = duration;
    p.topics = topics;
    return p;
}

Config small_config(int n_pois, int n_topics = 4) {
    Config c;
    c.n_pois = n_pois;
    c.n_topics = n_topics;
    c.bfs_iterations = 60;
    return c;
}

double truncated_mean(double mu, double s, double lo, double hi) {
    auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI); };
    const double a = (lo - mu) / s, b = (hi - mu) / s;
    return mu + s * (phi(a) - phi(b)) / (normal_cdf(b) - normal_cdf(a));
}

}  // namespace

TEST_CASE("interest examples") {
    CHECK(interest(poi(0, 0, 0, 10, 0), 0xFFFFFFFF) == 0.0);
    CHECK(interest(poi(0, 0, 0, 10, (1U << 3) | (1U << 7)), 1U << 3) == 0.5);
    CHECK(interest(poi(0, 0, 0, 10, 0b1011), 0xFFFFF) == 1.0);
}

TEST_CASE("generated POIs follow the truncated-normal priors") {
    Config cfg;
    cfg.n_pois = 100;
    cfg.n_topics = 20;
    std::vector<double> xs, durs;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        for (const auto& p : generate_pois(cfg, seed)) {
            REQUIRE(std::abs(p.x) <= 5.0);
            REQUIRE(std::abs(p.y) <= 5.0);
            REQUIRE(p.duration >= 0.0);
            REQUIRE(p.duration <= 100.0);
            xs.push_back(p.x);
            durs.push_back(p.duration);
        }
    auto check_mean = [](const std::vector<double>& v, double expect) {
        double m = 0, s2 = 0;
        for (double x : v) m += x;
        m /= v.size();
        for (double x : v) s2 += (x - m) * (x - m);
        const double se = std::sqrt(s2 / (v.size() - 1) / v.size());
        CHECK(std::abs(m - expect) <= 3 * se);
    };
    check_mean(xs, 0.0);
    check_mean(durs, truncated_mean(30, 20, 0, 100));
    CHECK(generate_pois(cfg, 3) == generate_pois(cfg, 3));
}

TEST_CASE("cost score crosses one half at the mean willingness to pay") {
    Daytrip env(small_config(1), {poi(1, 0, 5, 10, 1)});
    Omega w;
    w.mu_c = 140;
    w.sigma_c = 10;
    CHECK(env.cost_score(140.0, w) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(env.cost_score(0.0, w) == 1.0);
    CHECK(env.cost_score(1e6, w) == doctest::Approx(0.0));
}

TEST_CASE("objective is enjoyment times cost score") {
    const std::vector<Poi> pois{poi(1, 0, 60, 120, 0b0011), poi(0, 1, 100, 60, 0b0100), poi(-1, 0, 0, 90, 0)};
    Daytrip env(small_config(3), pois);
    Omega w;
    w.topics = 0b0001;
    w.mu_c = 140;
    w.sigma_c = 10;
    CHECK(env.objective(PoiSet{}, w) == 0.0);
    const auto s = PoiSet::from_indices({0, 1});
    const double f1 = (120 * 0.5 + 60 * 0.0) / 720.0;
    const double z = (160.0 - 140.0) / 10.0;
    const double f2 = (1 - normal_cdf(z)) / (1 - normal_cdf(-14.0));
    CHECK(env.enjoyment_score(s, w) == doctest::Approx(f1));
    CHECK(env.objective(s, w) == doctest::Approx(f1 * f2).epsilon(1e-12));
    // The zero-interest free POI changes neither score.
    auto s2 = s;
    s2.insert(2);
    CHECK(env.objective(s2, w) == doctest::Approx(env.objective(s, w)).epsilon(1e-15));
}

TEST_CASE("step rewards telescope to the final objective") {
    Config cfg = small_config(12);
    const auto pois = generate_pois(cfg, 5);
    Daytrip env(cfg, pois);
    Rng rng(4);
    const auto p = env.sample_true_params(rng);
    PoiSet s;
    double total = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto acts = env.actions(s);
        const int a = acts[rng.index(acts.size())];
        const auto next = env.transition(s, a, rng);
        total += env.reward(s, a, next, p);
        if (a == *env.noop_action()) CHECK(env.reward(s, a, next, p) == 0.0);
        s = next;
    }
    CHECK(total == doctest::Approx(env.objective(s, p)).epsilon(1e-12));
}

TEST_CASE("over-duration trips only allow removals and NOOP") {
    const std::vector<Poi> pois{poi(0.1, 0, 1, 300, 1), poi(0, 0.1, 1, 300, 1), poi(-0.1, 0, 1, 300, 1),
                                poi(0, -0.1, 1, 30, 1)};
    Daytrip env(small_config(4), pois);
    const auto two = PoiSet::from_indices({0, 1});
    CHECK_FALSE(env.over_duration(two));
    CHECK(env.actions(two) == std::vector<int>{0, 1, 2, 3, 4});
    const auto three = PoiSet::from_indices({0, 1, 2});
    CHECK(env.over_duration(three));
    CHECK(env.actions(three) == std::vector<int>{0, 1, 2, 4});
    // The agent's view applies the same limit.
    CHECK(env.agent_actions(three, false) == std::vector<int>{0, 1, 2, 4});
}

TEST_CASE("anchored agents only add POIs within 500 m, boundary included") {
    const std::vector<Poi> pois{poi(1, 0, 1, 10, 1), poi(0.5, 0.5, 1, 10, 1), poi(0.5, 0.5001, 1, 10, 1),
                                poi(3, 3, 1, 10, 1)};
    Daytrip env(small_config(4), pois);
    const auto s = PoiSet::from_indices({0});
    CHECK(env.agent_actions(s, true) == std::vector<int>{0, 1, 4});
    CHECK(env.agent_actions(s, false) == env.actions(s));
    // An empty trip measures distance to home.
    CHECK(env.agent_actions(PoiSet{}, true) == std::vector<int>{4});
}

TEST_CASE("agent Q covers exactly the agent-visible actions") {
    Config cfg = small_config(10);
    Daytrip env(cfg, generate_pois(cfg, 2));
    Rng rng(3);
    for (int k = 0; k < 5; ++k) {
        const auto p = env.sample_true_params(rng, k % 2 == 0);
        const auto s = env.random_trip(rng);
        const auto q = env.agent_q(s, p);
        CHECK(q.actions == env.agent_actions(s, decode_theta(p).anchoring));
        CHECK(q.find(*env.noop_action()) == doctest::Approx(0.0));
        for (double v : q.values) CHECK(std::isfinite(v));
    }
}

TEST_CASE("parameter encoding and priors") {
    Config cfg = small_config(5, 6);
    Daytrip env(cfg, generate_pois(cfg, 1));
    Rng rng(10);
    for (int k = 0; k < 50; ++k) {
        const auto p = env.sample_true_params(rng);
        const auto w = decode_omega(p, 6);
        const auto t = decode_theta(p);
        CHECK(t.beta1 >= 1.0);
        CHECK(t.beta1 <= 4.0);
        CHECK(t.beta2 == doctest::Approx(10 * t.beta1));
        CHECK(encode(w, t, 6) == p);
        const auto b = env.sample_belief_particle(rng);
        CHECK(decode_theta(b).beta1 == 2.0);
        CHECK(decode_theta(env.sample_belief_particle(rng, Config::BiasModel::none)).anchoring == false);
        CHECK(decode_theta(env.sample_belief_particle(rng, Config::BiasModel::always)).anchoring == true);
    }
    CHECK(decode_theta(env.sample_true_params(rng, true)).anchoring);
    CHECK_FALSE(decode_theta(env.sample_true_params(rng, false)).anchoring);
}

TEST_CASE("state JSON round trip") {
    Config cfg = small_config(8);
    Daytrip env(cfg, generate_pois(cfg, 1));
    const auto s = PoiSet::from_indices({1, 4, 7});
    const auto j = env.state_json(s);
    CHECK(env.state_from_json(j) == s);
    CHECK(env.state_from_json(nlohmann::json::array({1, 4, 7})) == s);
    CHECK(j.at("duration_minutes").get<double>() >= j.at("visit_minutes").get<double>());
    auto tour = j.at("itinerary").get<std::vector<int>>();
    std::sort(tour.begin(), tour.end());
    CHECK(tour == s.indices());
    CHECK_THROWS(env.state_from_json(nlohmann::json::array({9})));
    CHECK(pois_from_json(pois_to_json(env.pois())) == env.pois());
}
