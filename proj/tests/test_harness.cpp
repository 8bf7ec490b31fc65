#include "aiad/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace aiad;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("aiad_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSpec tiny(Domain d) {
    auto spec = ExperimentSpec::defaults(d);
    spec.runs = 2;
    spec.seed = 3;
    spec.modes = {"aiad", "unassisted"};
    spec.particles = 64;
    spec.planner.n_iterations = 200;
    spec.automation.n_iterations = 200;
    if (d == Domain::daytrip) {
        spec.budget = 4;
        spec.daytrip.n_pois = 8;
        spec.daytrip.n_topics = 4;
        spec.daytrip.bfs_iterations = 40;
    } else {
        spec.inventory.horizon = 4;
        spec.inventory.bfs_iterations = 100;
    }
    return spec;
}

}  // namespace

TEST_CASE("experiment output is byte-identical across reruns and replays") {
    for (auto d : {Domain::daytrip, Domain::inventory}) {
        auto spec = tiny(d);
        const auto dir_a = scratch("a" + to_string(d));
        spec.output = dir_a.string();
        const auto first = run_experiment(spec);
        spec.output = scratch("b" + to_string(d)).string();
        spec.threads = 2;
        run_experiment(spec);
        int logs = 0;
        for (const auto& e : fs::directory_iterator(fs::path(spec.output) / "runs")) {
            CHECK(slurp(e.path()) == slurp(dir_a / "runs" / e.path().filename()));
            ++logs;
        }
        CHECK(logs == 4);
        CHECK(fs::exists(fs::path(spec.output) / "summary.json"));
        CHECK(fs::exists(fs::path(spec.output) / "summary.csv"));
        CHECK(fs::exists(fs::path(spec.output) / "manifest.json"));

        const auto report = replay(spec.output);
        CHECK(report.compared == 4);
        CHECK(report.mismatched == 0);
        CHECK(run_log(spec, 1, "aiad") == slurp(fs::path(spec.output) / "runs" / "run001_aiad.jsonl"));

        const auto again = summarize_directory(spec.output);
        CHECK(again.summary == first.summary);
        CHECK(first.series.size() == 4);
        for (const auto& s : first.series) CHECK(static_cast<int>(s.value.size()) == spec.curve_points());
        fs::remove_all(spec.output);
        fs::remove_all(dir_a);
    }
}

TEST_CASE("a tampered log is reported by replay") {
    auto spec = tiny(Domain::daytrip);
    spec.runs = 1;
    spec.output = scratch("tamper").string();
    run_experiment(spec);
    const auto log = fs::path(spec.output) / "runs" / "run000_aiad.jsonl";
    std::string text = slurp(log);
    text[text.size() / 2] = text[text.size() / 2] == '1' ? '2' : '1';
    std::ofstream(log, std::ios::binary) << text;
    const auto report = replay(spec.output, 0, std::string("aiad"));
    CHECK(report.compared == 1);
    CHECK(report.mismatched == 1);
    fs::remove_all(spec.output);
}

TEST_CASE("series forward-fill the last record at each interaction count") {
    auto rec = [](int k, double v, std::optional<bool> acc) {
        return nlohmann::json{{"interactions", k}, {"objective", v}, {"entropy", 1.0 / (k + 1)}, {"reward_error", 0.5},
                              {"accepted", acc ? nlohmann::json(*acc) : nlohmann::json()}};
    };
    const std::vector<nlohmann::json> records{rec(1, 0.1, true), rec(1, 0.2, std::nullopt), rec(3, 0.4, false)};
    const nlohmann::json initial{{"value", 0.0}, {"entropy", 2.0}, {"reward_error", 0.7}};
    const auto s = series_from_records(records, initial, Domain::daytrip, 5);
    CHECK(s.value == std::vector<double>{0.0, 0.2, 0.2, 0.4, 0.4});
    CHECK(s.entropy[0] == 2.0);
    CHECK(s.reward_error[0] == 0.7);
    CHECK(s.final_value == 0.4);
    REQUIRE(s.accepted.size() == 4);
    CHECK(s.accepted[0] == true);
    CHECK_FALSE(s.accepted[1].has_value());
    CHECK(s.accepted[2] == false);
}

TEST_CASE("spec parsing") {
    const auto spec = spec_from_json({{"domain", "inventory"}, {"runs", 3}, {"modes", {"aiad", "aiad_optimism"}}});
    CHECK(spec.domain == Domain::inventory);
    CHECK(spec.runs == 3);
    CHECK(spec.planner.max_depth == ExperimentSpec::defaults(Domain::inventory).planner.max_depth);
    const auto round = spec_from_json(nlohmann::json(spec));
    CHECK(nlohmann::json(round) == nlohmann::json(spec));
    CHECK_THROWS(spec_from_json({{"domain", "chess"}}));
    CHECK_THROWS(spec_from_json({{"runs", 0}}));
    CHECK_THROWS(spec_from_json({{"modes", {"telepathy"}}}));

    const auto irl = parse_mode(Domain::daytrip, "irl_automation@10");
    CHECK(irl.kind == ModeKind::irl_automation);
    CHECK(irl.irl_demos == 10);
    CHECK(parse_mode(Domain::daytrip, "pl_automation@5").pl_queries == 5);
    CHECK(parse_mode(Domain::inventory, "aiad_pessimism").ablation == "pessimism");
    CHECK_THROWS(parse_mode(Domain::inventory, "pl_automation@5"));
}
