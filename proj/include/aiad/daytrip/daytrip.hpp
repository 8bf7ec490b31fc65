#pragma once

// Day-trip design: choose a subset of points of interest to visit in a day.

#include "aiad/agent_model.hpp"
#include "aiad/belief.hpp"
#include "aiad/daytrip/itinerary.hpp"
#include "aiad/decision.hpp"
#include "aiad/distributions.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace aiad::daytrip {

inline constexpr int kMaxPois = 128;
inline constexpr int kMaxTopics = 32;

struct Poi {
    double x = 0.0;  // km east of home
    double y = 0.0;  // km north of home
    double cost = 0.0;
    double duration = 0.0;  // minutes
    std::uint32_t topics = 0;

    Point point() const { return {x, y}; }
    bool operator==(const Poi&) const = default;
};

void to_json(nlohmann::json& j, const Poi& p);
void from_json(const nlohmann::json& j, Poi& p);

/// Flat JSON array of {x, y, cost, duration, topics: [ids]}.
nlohmann::json pois_to_json(const std::vector<Poi>& pois);
std::vector<Poi> pois_from_json(const nlohmann::json& j);

/// Subset of POIs (a trip). Supports up to kMaxPois POIs.
class PoiSet {
public:
    bool contains(int i) const { return (words_[word(i)] >> bit(i)) & 1U; }
    void insert(int i) { words_[word(i)] |= (std::uint64_t{1} << bit(i)); }
    void erase(int i) { words_[word(i)] &= ~(std::uint64_t{1} << bit(i)); }
    void toggle(int i) { words_[word(i)] ^= (std::uint64_t{1} << bit(i)); }
    int size() const { return std::popcount(words_[0]) + std::popcount(words_[1]); }
    bool empty() const { return words_[0] == 0 && words_[1] == 0; }
    std::vector<int> indices() const;
    std::uint64_t digest() const { return hash_combine(mix64(words_[0]), words_[1]); }
    bool operator==(const PoiSet&) const = default;

    static PoiSet from_indices(const std::vector<int>& idx);

private:
    static std::size_t word(int i) { return static_cast<std::size_t>(i) >> 6; }
    static unsigned bit(int i) { return static_cast<unsigned>(i) & 63U; }
    std::array<std::uint64_t, 2> words_{};
};

struct PoiSetHash {
    std::size_t operator()(const PoiSet& s) const { return static_cast<std::size_t>(s.digest()); }
};

/// Fraction of the POI's topics the agent is interested in.
double interest(const Poi& poi, std::uint32_t interested_topics);

struct Config {
    int n_pois = 30;
    int n_topics = 10;
    double max_minutes = 720.0;
    double speed_kmh = 5.0;
    double anchoring_radius_km = 0.5;
    int exact_tsp_limit = 12;

    // POI generation.
    double coord_sd = 1.15;
    double coord_limit = 5.0;
    double cost_mean = 10.0;
    double cost_sd = 3.0;
    double duration_mean = 30.0;
    double duration_sd = 20.0;
    double duration_max = 100.0;
    double topic_rate = 0.1;

    // Agent priors.
    double interest_rate = 0.3;
    double mu_c_mean = 140.0;
    double mu_c_sd = 25.0;
    double sigma_c = 10.0;
    double beta1_lo = 1.0;
    double beta1_hi = 4.0;
    double beta2_factor = 10.0;
    double anchoring_rate = 0.5;

    // Assistant's belief.
    /// beta1 assumed by the assistant; <= 0 means infer it under the true prior.
    double belief_beta1 = 2.0;
    enum class BiasModel { infer, none, always };
    BiasModel bias_model = BiasModel::infer;

    // Agent-side Q search.
    int bfs_iterations = 500;
    int bfs_depth = 3;
    double agent_gamma = 1.0;

    static Config full_scale();
};

NLOHMANN_JSON_SERIALIZE_ENUM(Config::BiasModel, {{Config::BiasModel::infer, "infer"},
                                                 {Config::BiasModel::none, "none"},
                                                 {Config::BiasModel::always, "always"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Config, n_pois, n_topics, max_minutes, speed_kmh, anchoring_radius_km,
                                                exact_tsp_limit, coord_sd, coord_limit, cost_mean, cost_sd,
                                                duration_mean, duration_sd, duration_max, topic_rate, interest_rate,
                                                mu_c_mean, mu_c_sd, sigma_c, beta1_lo, beta1_hi, beta2_factor,
                                                anchoring_rate, belief_beta1, bias_model, bfs_iterations, bfs_depth,
                                                agent_gamma)

std::vector<Poi> generate_pois(const Config& cfg, std::uint64_t seed);

/// omega = [t_1..t_M, mu_c, sigma_c]; theta = [anchoring, beta1, beta2].
struct Omega {
    std::uint32_t topics = 0;
    double mu_c = 140.0;
    double sigma_c = 10.0;
};
struct Theta {
    bool anchoring = false;
    double beta1 = 2.0;
    double beta2 = 20.0;
};

Omega decode_omega(const ParameterSample& p, int n_topics);
Theta decode_theta(const ParameterSample& p);
ParameterSample encode(const Omega& w, const Theta& t, int n_topics);

struct TripInfo {
    Tour tour;
    double visit_minutes = 0.0;
    double travel_minutes = 0.0;
    double duration() const { return visit_minutes + travel_minutes; }
};

class Daytrip {
public:
    using State = PoiSet;

    Daytrip(Config cfg, std::vector<Poi> pois);

    const Config& config() const { return cfg_; }
    const std::vector<Poi>& pois() const { return pois_; }
    int n_pois() const { return static_cast<int>(pois_.size()); }

    // Environment.
    State initial_state() const { return {}; }
    std::vector<int> actions(const State& s) const;
    State transition(const State& s, int a, Rng& rng) const;
    double reward(const State& s, int a, const State& next, const ParameterSample& p) const;
    double discount() const { return 1.0; }
    bool is_terminal(const State&) const { return false; }
    std::uint64_t digest(const State& s) const { return s.digest(); }
    std::optional<int> noop_action() const { return n_pois(); }
    bool is_add(const State& s, int a) const { return a < n_pois() && !s.contains(a); }

    /// f = f1 * f2: interest-weighted visit time over the day, times the
    /// willingness to pay the total admission.
    double objective(const State& s, const ParameterSample& p) const;
    double objective(const State& s, const Omega& w) const;
    double enjoyment_score(const State& s, const Omega& w) const;
    double cost_score(double total_cost, const Omega& w) const;
    double total_cost(const State& s) const;
    double visit_minutes(const State& s) const;

    /// Itinerary shown to the agent: exact-or-refined shortest tour.
    TripInfo optimal_itinerary(const State& s) const;
    /// The agent's own perception of the itinerary.
    TripInfo heuristic_itinerary(const State& s) const;
    /// True when the shortest itinerary exceeds the day limit.
    bool over_duration(const State& s) const;

    // Agent model.
    /// Actions the agent considers: removals, NOOP, and additions that fit
    /// its perceived duration and (if anchored) lie within the radius.
    std::vector<int> agent_actions(const State& s, bool anchoring) const;
    QEstimate agent_q(const State& s, const ParameterSample& p) const;
    AgentParams agent_params(const ParameterSample& p) const;

    // Priors.
    ParameterSample sample_true_params(Rng& rng, std::optional<bool> anchoring = std::nullopt) const;
    ParameterSample sample_belief_particle(Rng& rng) const { return sample_belief_particle(rng, cfg_.bias_model); }
    ParameterSample sample_belief_particle(Rng& rng, Config::BiasModel bias) const;
    BeliefBinning binning() const;
    int omega_size() const { return cfg_.n_topics + 2; }

    /// Random feasible trip reached by a 5-15 step random walk from empty.
    State random_trip(Rng& rng) const;

    nlohmann::json state_json(const State& s) const;
    State state_from_json(const nlohmann::json& j) const;

private:
    struct HeuristicInfo {
        TripInfo trip;
        PoiSet near;
    };
    std::shared_ptr<const HeuristicInfo> heuristic_info(const State& s) const;
    std::vector<Point> stop_points(const State& s, std::vector<int>& ids) const;

    Config cfg_;
    std::vector<Poi> pois_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<PoiSet, std::shared_ptr<const HeuristicInfo>, PoiSetHash> heuristic_cache_;
    mutable std::unordered_map<PoiSet, bool, PoiSetHash> over_cache_;
};

}  // namespace aiad::daytrip
