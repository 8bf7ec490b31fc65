#include "aiad/http.hpp"
#include "aiad/service.hpp"

#include <doctest.h>
#include <httplib.h>

#include <chrono>
#include <thread>

using namespace aiad::service;
using nlohmann::json;

namespace {

json small_daytrip(std::uint64_t seed) {
    return {{"domain", "daytrip"},
            {"seed", seed},
            {"particles", 64},
            {"config", {{"n_pois", 10}, {"n_topics", 4}, {"bfs_iterations", 40}}},
            {"planner", {{"n_iterations", 200}}}};
}

json long_days() {
    json pois = json::array();
    for (int i = 0; i < 4; ++i)
        pois.push_back({{"x", 0.1 * i}, {"y", 0.1}, {"cost", 5.0}, {"duration", 300.0}, {"topics", json::array({0})}});
    return pois;
}

int status_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ServiceError& e) {
        return e.status();
    }
    return 200;
}

}  // namespace

TEST_CASE("a day-trip session advises, learns and finishes") {
    SessionStore store;
    const json s = store.create(small_daytrip(4));
    const std::string id = s.at("id");
    CHECK(s.at("version") == kApiVersion);
    CHECK(s.at("status") == "active");
    CHECK(s.at("instance").at("pois").size() == 10);
    CHECK(s.at("state").contains("estimated_objective"));
    CHECK_FALSE(s.at("state").contains("reward"));
    REQUIRE(s.at("advice").is_object());
    CHECK(s.at("belief").at("topic_interest").size() == 4);

    // Same seed, same map.
    CHECK(store.create(small_daytrip(4)).at("instance") == s.at("instance"));

    const json adv = store.advice(id);
    CHECK(adv.at("version") == kApiVersion);
    const int a = adv.at("advice").at("action");
    const json after = store.submit(id, {{"action", a}});
    CHECK(after.at("result").at("accepted") == true);
    CHECK(after.at("log").size() == 1);
    CHECK(after.at("belief").at("mean_omega") != s.at("belief").at("mean_omega"));

    const json done = store.submit(id, {{"action", "noop"}});
    CHECK(done.at("status") == "done");
    CHECK(done.at("advice").is_null());
    CHECK(status_of([&] { store.submit(id, {{"action", 0}}); }) == 409);
}

TEST_CASE("illegal actions are rejected without touching the session") {
    SessionStore store;
    json req = small_daytrip(1);
    req["config"]["n_pois"] = 4;
    req["instance"] = {{"pois", long_days()}};
    const std::string id = store.create(req).at("id");
    store.submit(id, {{"action", 0}});
    store.submit(id, {{"action", 1}});
    store.submit(id, {{"action", 2}});
    const json before = store.get(id, true);
    CHECK(before.at("state").at("over_duration") == true);
    try {
        store.submit(id, {{"action", 3}});
        FAIL("expected rejection");
    } catch (const ServiceError& e) {
        CHECK(e.status() == 422);
        CHECK(std::string(e.what()).find("12 hours") != std::string::npos);
    }
    CHECK(store.get(id, true) == before);
    CHECK(status_of([&] { store.submit(id, {{"action", 17}}); }) == 422);
    CHECK(status_of([&] { store.submit(id, {{"action", "jump"}}); }) == 400);
    CHECK(status_of([&] { store.submit(id, json::object()); }) == 400);
    CHECK(status_of([&] { store.get("nope"); }) == 404);
    CHECK(status_of([&] { store.create({{"domain", "chess"}}); }) == 400);
    // Removals remain legal.
    CHECK(store.submit(id, {{"action", 2}}).at("state").at("over_duration") == false);
}

TEST_CASE("full snapshots restore losslessly") {
    SessionStore store;
    const std::string id = store.create(small_daytrip(9)).at("id");
    store.submit(id, {{"action", store.advice(id).at("advice").at("action")}});
    const json snap = json::parse(store.get(id, true).dump());
    SessionStore other;
    const json restored = other.restore(snap);
    CHECK(restored == store.get(id));
    CHECK(other.get(id, true) == snap);
    CHECK(status_of([&] { other.restore(snap); }) == 409);
}

TEST_CASE("inventory sessions run to the horizon") {
    SessionStore store;
    const json s = store.create({{"domain", "inventory"},
                                 {"seed", 2},
                                 {"particles", 32},
                                 {"config", {{"horizon", 3}, {"bfs_iterations", 100}}},
                                 {"planner", {{"n_iterations", 200}}}});
    const std::string id = s.at("id");
    CHECK(s.at("advice").at("production").size() == 3);
    CHECK(s.at("belief").contains("bias"));
    json r = store.submit(id, {{"action", {{"production", {2, 2, 2}}}}});
    CHECK(r.at("state").at("t") == 1);
    CHECK(status_of([&] { store.submit(id, {{"action", {{"production", {1, 0, 0}}}}}); }) == 422);
    store.submit(id, {{"action", 0}});
    r = store.submit(id, {{"action", 83}});
    CHECK(r.at("status") == "done");
    CHECK(r.at("state").at("terminal") == true);
}

TEST_CASE("reads are not blocked by planning in progress") {
    SessionStore store;
    const std::string quick = store.create(small_daytrip(1)).at("id");
    json slow_req = small_daytrip(2);
    slow_req["planner"] = {{"n_iterations", 100000000}, {"time_limit_seconds", 1.5}};
    const std::string slow = store.create(slow_req).at("id");
    const int a = store.advice(slow).at("advice").at("action");
    std::thread worker([&] { store.submit(slow, {{"action", a}}); });
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    const auto t0 = std::chrono::steady_clock::now();
    store.get(quick);
    const json mid = store.get(slow);
    const double waited = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worker.join();
    CHECK(waited < 0.5);
    CHECK(mid.at("log").size() <= 1);
    CHECK(store.get(slow).at("log").size() == 1);
}

TEST_CASE("HTTP round trip") {
    SessionStore store;
    httplib::Server server;
    mount_routes(server, store);
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/sessions", small_daytrip(3).dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    const json created = json::parse(res->body);
    const std::string id = created.at("id");

    res = client.Get("/sessions/" + id + "/advice");
    REQUIRE(res);
    CHECK(res->status == 200);
    const int a = json::parse(res->body).at("advice").at("action");

    res = client.Post("/sessions/" + id + "/actions", json{{"action", a}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body).at("log").at(0).at("accepted") == true);

    res = client.Post("/sessions/" + id + "/actions", json{{"action", 99}}.dump(), "application/json");
    CHECK(res->status == 422);
    CHECK(json::parse(res->body).at("version") == kApiVersion);
    res = client.Post("/sessions/" + id + "/actions", "{not json", "application/json");
    CHECK(res->status == 400);
    res = client.Get("/sessions/zzz");
    CHECK(res->status == 404);

    res = client.Get("/sessions/" + id + "?full=1");
    CHECK(json::parse(res->body).contains("belief_state"));
    res = client.Post("/sessions/" + id + "/finish", "", "application/json");
    CHECK(json::parse(res->body).at("status") == "done");
    res = client.Post("/sessions/" + id + "/actions", json{{"action", 0}}.dump(), "application/json");
    CHECK(res->status == 409);

    server.stop();
    t.join();
}
