#include "aiad/harness.hpp"

#include "aiad/stats.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace aiad {

namespace fs = std::filesystem;

std::string to_string(Domain d) { return d == Domain::daytrip ? "daytrip" : "inventory"; }

Domain domain_from_string(const std::string& s) {
    if (s == "daytrip") return Domain::daytrip;
    if (s == "inventory") return Domain::inventory;
    throw std::invalid_argument("unknown domain: " + s);
}

NLOHMANN_JSON_SERIALIZE_ENUM(AnchoringPolicy, {{AnchoringPolicy::prior, "prior"},
                                               {AnchoringPolicy::alternate, "alternate"},
                                               {AnchoringPolicy::always, "always"},
                                               {AnchoringPolicy::never, "never"}})

ExperimentSpec ExperimentSpec::defaults(Domain d) {
    ExperimentSpec s;
    s.domain = d;
    if (d == Domain::daytrip) {
        s.planner = PlannerConfig{0.95, 2, 10000, 0.1, 100, std::nullopt};
        s.automation = PlannerConfig{0.99, 3, 10000, 0.1, 100, std::nullopt};
        s.particles = 1024;
        s.budget = 20;
        s.max_steps = 100;
        s.daytrip.bfs_iterations = 150;
    } else {
        s.planner = PlannerConfig{0.99, 4, 20000, 10.0, 200, std::nullopt};
        s.automation = PlannerConfig{0.99, 4, 20000, 10.0, 200, std::nullopt};
        s.particles = 2048;
        s.budget = -1;
        s.max_steps = 1000;
        s.inventory = inventory::Config::desk_scale();
    }
    return s;
}

int ExperimentSpec::curve_points() const {
    if (budget >= 0) return budget + 1;
    if (domain == Domain::inventory) return inventory.horizon + 1;
    return max_steps + 1;
}

void to_json(nlohmann::json& j, const ExperimentSpec& s) {
    j = nlohmann::json{{"name", s.name},
                       {"domain", to_string(s.domain)},
                       {"runs", s.runs},
                       {"seed", s.seed},
                       {"modes", s.modes},
                       {"budget", s.budget},
                       {"max_steps", s.max_steps},
                       {"particles", s.particles},
                       {"planner", s.planner},
                       {"automation", s.automation},
                       {"pl_pool", s.pl_pool},
                       {"anchoring", s.anchoring},
                       {"output", s.output},
                       {"threads", s.threads}};
    if (s.domain == Domain::daytrip)
        j["daytrip"] = s.daytrip;
    else
        j["inventory"] = s.inventory;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    ExperimentSpec s = ExperimentSpec::defaults(domain_from_string(j.value("domain", std::string("daytrip"))));
    s.name = j.value("name", s.name);
    s.runs = j.value("runs", s.runs);
    s.seed = j.value("seed", s.seed);
    s.modes = j.value("modes", s.modes);
    s.budget = j.value("budget", s.budget);
    s.max_steps = j.value("max_steps", s.max_steps);
    s.particles = j.value("particles", s.particles);
    if (j.contains("planner")) from_json(j["planner"], s.planner);
    if (j.contains("automation")) from_json(j["automation"], s.automation);
    s.pl_pool = j.value("pl_pool", s.pl_pool);
    if (j.contains("anchoring")) s.anchoring = j["anchoring"].get<AnchoringPolicy>();
    if (j.contains("daytrip")) {
        nlohmann::json merged = s.daytrip;
        merged.update(j["daytrip"]);
        s.daytrip = merged.get<daytrip::Config>();
    }
    if (j.contains("inventory")) from_json(j["inventory"], s.inventory);
    s.output = j.value("output", s.output);
    s.threads = j.value("threads", s.threads);

    if (s.runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (s.particles < 1) throw std::invalid_argument("particles must be >= 1");
    if (s.modes.empty()) throw std::invalid_argument("at least one mode is required");
    if (s.max_steps < 0 || s.pl_pool < 1 || s.threads < 1) throw std::invalid_argument("invalid step cap, pool size or thread count");
    std::set<std::string> seen;
    for (const auto& m : s.modes) {
        parse_mode(s.domain, m);
        if (!seen.insert(m).second) throw std::invalid_argument("duplicate mode: " + m);
    }
    return s;
}

ExperimentSpec load_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read spec file: " + path.string());
    ExperimentSpec s = spec_from_json(nlohmann::json::parse(in, nullptr, true, true));
    if (const char* env = std::getenv("AIAD_SEED"); env && *env) s.seed = std::stoull(env);
    return s;
}

ModeSpec parse_mode(Domain domain, const std::string& id) {
    ModeSpec m;
    m.id = id;
    std::string base = id;
    std::optional<int> count;
    if (auto at = id.find('@'); at != std::string::npos) {
        base = id.substr(0, at);
        try {
            std::size_t used = 0;
            count = std::stoi(id.substr(at + 1), &used);
            if (used != id.size() - at - 1 || *count < 0) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad interaction count in mode: " + id);
        }
    }
    static const std::set<std::string> daytrip_ablations{"no_bias", "bias_assumed"};
    static const std::set<std::string> inventory_ablations{"no_bias", "optimism", "pessimism"};
    if (base.rfind("aiad_", 0) == 0 && base != "aiad_automation") {
        m.ablation = base.substr(5);
        const auto& allowed = domain == Domain::daytrip ? daytrip_ablations : inventory_ablations;
        if (!allowed.count(m.ablation)) throw std::invalid_argument("unknown mode: " + id);
        m.kind = ModeKind::aiad;
    } else {
        m.kind = mode_kind_from_string(base);
    }
    const bool counted = m.kind == ModeKind::irl_automation || m.kind == ModeKind::pl_automation;
    if (counted != count.has_value()) throw std::invalid_argument("mode " + id + (counted ? " needs" : " takes no") + " @N suffix");
    if (m.kind == ModeKind::irl_automation) m.irl_demos = *count;
    if (m.kind == ModeKind::pl_automation) {
        if (domain != Domain::daytrip) throw std::invalid_argument("preference queries are day-trip only");
        m.pl_queries = *count;
    }
    if (!m.ablation.empty() && count) throw std::invalid_argument("unknown mode: " + id);
    return m;
}

// ---------------------------------------------------------------------------
// Per-domain plumbing.

namespace {

nlohmann::json compact(const daytrip::Daytrip&, const daytrip::PoiSet& s) { return s.indices(); }
nlohmann::json compact(const inventory::Inventory&, const inventory::State& s) {
    return {{"inventory", s.inventory}, {"t", s.t}};
}

struct DaytripAdapter {
    using D = daytrip::Daytrip;

    static std::unique_ptr<D> make_env(const ExperimentSpec& spec, std::uint64_t seed) {
        return std::make_unique<D>(spec.daytrip, daytrip::generate_pois(spec.daytrip, seed));
    }
    static ParameterSample truth(const ExperimentSpec& spec, const D& env, int run, std::uint64_t seed) {
        Rng rng(seed, Stream::true_params);
        std::optional<bool> anchoring;
        switch (spec.anchoring) {
            case AnchoringPolicy::prior: break;
            case AnchoringPolicy::alternate: anchoring = run % 2 == 0; break;
            case AnchoringPolicy::always: anchoring = true; break;
            case AnchoringPolicy::never: anchoring = false; break;
        }
        return env.sample_true_params(rng, anchoring);
    }
    static PriorSampler sampler(const D& env, const std::string& ablation) {
        auto bias = env.config().bias_model;
        if (ablation == "no_bias") bias = daytrip::Config::BiasModel::none;
        if (ablation == "bias_assumed") bias = daytrip::Config::BiasModel::always;
        return [&env, bias](Rng& rng) { return env.sample_belief_particle(rng, bias); };
    }
    static nlohmann::json instance(const D& env) { return {{"pois", daytrip::pois_to_json(env.pois())}}; }
    static bool anchored(const ParameterSample& p) { return daytrip::decode_theta(p).anchoring; }
    static double initial_value(const D& env, const ParameterSample& truth) {
        return env.objective(env.initial_state(), truth);
    }
};

struct InventoryAdapter {
    using D = inventory::Inventory;

    static std::unique_ptr<D> make_env(const ExperimentSpec& spec, std::uint64_t seed) {
        return std::make_unique<D>(spec.inventory, inventory::generate_schedule(spec.inventory, seed));
    }
    static ParameterSample truth(const ExperimentSpec&, const D& env, int, std::uint64_t seed) {
        Rng rng(seed, Stream::true_params);
        return env.sample_true_params(rng);
    }
    static PriorSampler sampler(const D& env, const std::string& ablation) {
        auto bias = env.config().assumed_bias;
        if (ablation == "no_bias") bias = 0.0;
        if (ablation == "optimism") bias = 1.0;
        if (ablation == "pessimism") bias = -1.0;
        return [&env, bias](Rng& rng) { return env.sample_belief_particle(rng, bias); };
    }
    static nlohmann::json instance(const D& env) { return {{"schedule", env.schedule()}}; }
    static bool anchored(const ParameterSample&) { return false; }
    static double initial_value(const D&, const ParameterSample&) { return 0.0; }
};

template <class State, class D>
nlohmann::json record_json(const D& env, const InteractionRecord<State>& r, std::size_t step) {
    nlohmann::json j{{"step", step},
                     {"kind", to_string(r.kind)},
                     {"state", compact(env, r.state)},
                     {"next_state", compact(env, r.next_state)},
                     {"reward", r.reward},
                     {"interactions", r.interactions},
                     {"discounted_return", r.discounted_return}};
    j["advice"] = r.advice ? nlohmann::json(*r.advice) : nlohmann::json();
    j["action"] = r.action ? nlohmann::json(*r.action) : nlohmann::json();
    j["accepted"] = r.accepted ? nlohmann::json(*r.accepted) : nlohmann::json();
    j["objective"] = r.objective ? nlohmann::json(*r.objective) : nlohmann::json();
    j["entropy"] = r.entropy ? nlohmann::json(*r.entropy) : nlohmann::json();
    j["reward_error"] = r.reward_error ? nlohmann::json(*r.reward_error) : nlohmann::json();
    if (!r.extra.is_null()) j["extra"] = r.extra;
    return j;
}

struct ModeOutcome {
    std::string mode;
    std::string log;        // JSON lines
    std::string telemetry;  // JSON lines
    nlohmann::json initial;
    nlohmann::json info;
    RunSeries series;
};

struct RunOutcome {
    nlohmann::json meta;
    std::vector<ModeOutcome> modes;
};

std::uint64_t run_seed(const ExperimentSpec& spec, int run) {
    return derive_seed(spec.seed, Stream::run, static_cast<std::uint64_t>(run));
}

template <class A>
RunOutcome execute_run(const ExperimentSpec& spec, int run, const std::vector<std::string>& modes) {
    using D = typename A::D;
    const std::uint64_t seed = run_seed(spec, run);
    const auto env = A::make_env(spec, seed);
    const ParameterSample truth = A::truth(spec, *env, run, seed);
    const AgentModel<D> model(*env, 200000);
    const Domain domain = spec.domain;

    RunOutcome out;
    out.meta = {{"index", run}, {"seed", seed}, {"truth", truth}, {"instance", A::instance(*env)}};
    if (domain == Domain::daytrip) out.meta["anchored"] = A::anchored(truth);

    for (const auto& id : modes) {
        const ModeSpec ms = parse_mode(domain, id);
        ParticleBelief belief = init_belief(A::sampler(*env, ms.ablation), spec.particles, seed);

        ModeConfig mc;
        mc.kind = ms.kind;
        mc.planner = spec.planner;
        mc.automation = spec.automation;
        mc.budget = spec.budget;
        mc.max_steps = spec.max_steps;
        mc.irl_demos = ms.irl_demos;
        mc.pl_queries = ms.pl_queries;
        mc.pl_pool = spec.pl_pool;
        mc.reset_before_automation = domain == Domain::daytrip;

        ModeOutcome mo;
        mo.mode = id;
        const auto binning = env->binning();
        mo.initial = {{"value", A::initial_value(*env, truth)},
                      {"entropy", posterior_entropy(belief, binning)},
                      {"reward_error", reward_error(belief, truth.omega)}};
        auto result = run_mode(RunContext<D>{env.get(), &model, truth, std::move(belief), binning, seed}, mc);

        std::vector<nlohmann::json> records;
        std::ostringstream log;
        for (std::size_t i = 0; i < result.trajectory.records.size(); ++i) {
            records.push_back(record_json(*env, result.trajectory.records[i], i));
            log << records.back().dump() << '\n';
        }
        std::ostringstream tel;
        for (const auto& t : result.telemetry) tel << t.dump() << '\n';
        mo.log = log.str();
        mo.telemetry = tel.str();
        mo.info = {{"steps", records.size()}, {"belief_updates", result.belief_updates},
                   {"degenerate_updates", result.belief.degenerate_updates()}};
        mo.series = series_from_records(records, mo.initial, domain, spec.curve_points());
        mo.series.run = run;
        mo.series.mode = id;
        mo.series.anchored = A::anchored(truth);
        out.modes.push_back(std::move(mo));
    }
    return out;
}

RunOutcome execute(const ExperimentSpec& spec, int run, const std::vector<std::string>& modes) {
    return spec.domain == Domain::daytrip ? execute_run<DaytripAdapter>(spec, run, modes)
                                          : execute_run<InventoryAdapter>(spec, run, modes);
}

std::string log_name(int run, const std::string& mode) {
    std::string safe = mode;
    for (char& c : safe)
        if (c == '@') c = '_';
    std::ostringstream os;
    os << "run" << std::setw(3) << std::setfill('0') << run << '_' << safe << ".jsonl";
    return os.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<nlohmann::json> parse_lines(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    return out;
}

}  // namespace

RunSeries series_from_records(const std::vector<nlohmann::json>& records, const nlohmann::json& initial,
                              Domain domain, int points) {
    if (points < 1) throw ContractViolation("series needs at least one point");
    const char* value_key = domain == Domain::daytrip ? "objective" : "discounted_return";
    RunSeries s;
    const auto n = static_cast<std::size_t>(points);
    std::vector<std::optional<std::array<double, 3>>> at(n);
    s.accepted.assign(n - 1, std::nullopt);
    for (const auto& r : records) {
        const int k = r.at("interactions").get<int>();
        if (k < 0 || k >= points) continue;
        auto num = [&](const char* key) { return r.at(key).is_null() ? 0.0 : r.at(key).get<double>(); };
        at[static_cast<std::size_t>(k)] = std::array<double, 3>{num(value_key), num("entropy"), num("reward_error")};
        if (!r.at("accepted").is_null() && k >= 1) s.accepted[static_cast<std::size_t>(k - 1)] = r["accepted"].get<bool>();
    }
    std::array<double, 3> cur{initial.at("value").get<double>(), initial.at("entropy").get<double>(),
                              initial.at("reward_error").get<double>()};
    for (std::size_t k = 0; k < n; ++k) {
        if (at[k]) cur = *at[k];
        s.value.push_back(cur[0]);
        s.entropy.push_back(cur[1]);
        s.reward_error.push_back(cur[2]);
    }
    s.final_value = s.value.back();
    return s;
}

nlohmann::json summarize(const std::vector<RunSeries>& series, const ExperimentSpec& spec) {
    std::map<std::string, std::vector<const RunSeries*>> by_mode;
    for (const auto& s : series) by_mode[s.mode].push_back(&s);

    nlohmann::json modes = nlohmann::json::object();
    for (const auto& id : spec.modes) {
        auto it = by_mode.find(id);
        if (it == by_mode.end()) continue;
        auto& runs = it->second;
        std::sort(runs.begin(), runs.end(), [](const RunSeries* a, const RunSeries* b) { return a->run < b->run; });
        std::vector<double> finals;
        for (const auto* r : runs) finals.push_back(r->final_value);
        const MeanSe f = mean_se(finals);
        nlohmann::json curve{{"value", nlohmann::json::array()},    {"value_se", nlohmann::json::array()},
                             {"entropy", nlohmann::json::array()},  {"reward_error", nlohmann::json::array()},
                             {"acceptance", nlohmann::json::array()}, {"advised", nlohmann::json::array()}};
        const std::size_t points = runs.front()->value.size();
        for (std::size_t k = 0; k < points; ++k) {
            std::vector<double> v, e, err;
            for (const auto* r : runs) {
                v.push_back(r->value[k]);
                e.push_back(r->entropy[k]);
                err.push_back(r->reward_error[k]);
            }
            const MeanSe mv = mean_se(v);
            curve["value"].push_back(mv.mean);
            curve["value_se"].push_back(mv.se);
            curve["entropy"].push_back(mean_se(e).mean);
            curve["reward_error"].push_back(mean_se(err).mean);
        }
        for (std::size_t k = 0; k + 1 < points; ++k) {
            int advised = 0, accepted = 0;
            for (const auto* r : runs)
                if (r->accepted[k]) {
                    ++advised;
                    accepted += *r->accepted[k] ? 1 : 0;
                }
            curve["acceptance"].push_back(advised ? nlohmann::json(static_cast<double>(accepted) / advised) : nlohmann::json());
            curve["advised"].push_back(advised);
        }
        modes[id] = {{"final", {{"mean", f.mean}, {"se", f.se}, {"n", f.n}}}, {"curve", curve}};
    }

    nlohmann::json tests = nlohmann::json::array();
    if (by_mode.count("aiad")) {
        std::map<int, double> base;
        for (const auto* r : by_mode["aiad"]) base[r->run] = r->final_value;
        for (const auto& id : spec.modes) {
            if (id == "aiad" || !by_mode.count(id)) continue;
            std::vector<double> x, y;
            for (const auto* r : by_mode[id])
                if (base.count(r->run)) {
                    x.push_back(base[r->run]);
                    y.push_back(r->final_value);
                }
            const WilcoxonResult w = wilcoxon_signed_rank(x, y);
            double diff = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) diff += (x[i] - y[i]) / static_cast<double>(x.size());
            tests.push_back({{"a", "aiad"},
                             {"b", id},
                             {"pairs", x.size()},
                             {"mean_difference", diff},
                             {"statistic", w.statistic},
                             {"p_value", w.p_value},
                             {"exact", w.exact}});
        }
    }
    return {{"version", kFormatVersion},
            {"name", spec.name},
            {"domain", to_string(spec.domain)},
            {"runs", spec.runs},
            {"metric", spec.domain == Domain::daytrip ? "objective" : "discounted_return"},
            {"modes", modes},
            {"tests", tests}};
}

std::string summary_csv(const nlohmann::json& summary) {
    std::map<std::string, double> p;
    for (const auto& t : summary.at("tests")) p[t.at("b").get<std::string>()] = t.at("p_value").get<double>();
    std::ostringstream os;
    os << std::setprecision(10) << "mode,mean,se,n,p_vs_aiad\n";
    for (const auto& [mode, m] : summary.at("modes").items()) {
        const auto& f = m.at("final");
        os << mode << ',' << f.at("mean").get<double>() << ',' << f.at("se").get<double>() << ',' << f.at("n").get<int>()
           << ',';
        if (p.count(mode)) os << p[mode];
        os << '\n';
    }
    return os.str();
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    std::vector<RunOutcome> outcomes(static_cast<std::size_t>(spec.runs));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int i = next++; i < spec.runs; i = next++) {
            try {
                outcomes[static_cast<std::size_t>(i)] = execute(spec, i, spec.modes);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int threads = std::min(spec.threads, spec.runs);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult res;
    res.manifest = {{"version", kFormatVersion}, {"spec", spec}, {"runs", nlohmann::json::array()}};
    for (auto& o : outcomes) {
        nlohmann::json meta = o.meta;
        meta["modes"] = nlohmann::json::object();
        for (auto& m : o.modes) {
            const int run = meta["index"].get<int>();
            meta["modes"][m.mode] = {{"log", "runs/" + log_name(run, m.mode)}, {"initial", m.initial}, {"info", m.info}};
            res.series.push_back(m.series);
        }
        res.manifest["runs"].push_back(std::move(meta));
    }
    res.summary = summarize(res.series, spec);

    if (!spec.output.empty()) {
        const fs::path dir(spec.output);
        fs::create_directories(dir / "runs");
        fs::create_directories(dir / "telemetry");
        for (const auto& o : outcomes) {
            const int run = o.meta["index"].get<int>();
            for (const auto& m : o.modes) {
                write_file(dir / "runs" / log_name(run, m.mode), m.log);
                write_file(dir / "telemetry" / log_name(run, m.mode), m.telemetry);
            }
        }
        write_file(dir / "manifest.json", res.manifest.dump(2));
        write_file(dir / "summary.json", res.summary.dump(2));
        write_file(dir / "summary.csv", summary_csv(res.summary));
    }
    return res;
}

std::string run_log(const ExperimentSpec& spec, int run, const std::string& mode) {
    if (run < 0 || run >= spec.runs) throw std::invalid_argument("run index out of range");
    return execute(spec, run, {mode}).modes.front().log;
}

namespace {
ExperimentSpec manifest_spec(const nlohmann::json& manifest) {
    if (manifest.value("version", std::string()) != kFormatVersion)
        throw std::runtime_error("unsupported manifest version");
    return spec_from_json(manifest.at("spec"));
}
}  // namespace

ExperimentResult summarize_directory(const fs::path& dir) {
    ExperimentResult res;
    res.manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    const ExperimentSpec spec = manifest_spec(res.manifest);
    for (const auto& run : res.manifest.at("runs")) {
        for (const auto& [mode, info] : run.at("modes").items()) {
            RunSeries s = series_from_records(parse_lines(read_file(dir / info.at("log").get<std::string>())),
                                              info.at("initial"), spec.domain, spec.curve_points());
            s.run = run.at("index").get<int>();
            s.mode = mode;
            s.anchored = run.value("anchored", false);
            res.series.push_back(std::move(s));
        }
    }
    res.summary = summarize(res.series, spec);
    return res;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

ReplayReport replay(const fs::path& dir, std::optional<int> run, std::optional<std::string> mode) {
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    const ExperimentSpec spec = manifest_spec(manifest);
    ReplayReport rep;
    for (const auto& r : manifest.at("runs")) {
        const int index = r.at("index").get<int>();
        if (run && *run != index) continue;
        for (const auto& [m, info] : r.at("modes").items()) {
            if (mode && *mode != m) continue;
            const std::string expected = read_file(dir / info.at("log").get<std::string>());
            const std::string actual = run_log(spec, index, m);
            ++rep.compared;
            if (expected != actual) {
                ++rep.mismatched;
                const auto a = split_lines(expected), b = split_lines(actual);
                std::size_t line = 0;
                while (line < a.size() && line < b.size() && a[line] == b[line]) ++line;
                rep.messages.push_back("run " + std::to_string(index) + " mode " + m + ": first difference at line " +
                                       std::to_string(line + 1));
            } else {
                rep.messages.push_back("run " + std::to_string(index) + " mode " + m + ": identical");
            }
        }
    }
    if (rep.compared == 0) throw std::invalid_argument("no logged run matches the replay selection");
    return rep;
}

}  // namespace aiad
