#include "aiad/daytrip/daytrip.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace aiad::daytrip {

void to_json(nlohmann::json& j, const Poi& p) {
    std::vector<int> topics;
    for (int t = 0; t < kMaxTopics; ++t)
        if ((p.topics >> t) & 1U) topics.push_back(t);
    j = nlohmann::json{{"x", p.x}, {"y", p.y}, {"cost", p.cost}, {"duration", p.duration}, {"topics", topics}};
}

void from_json(const nlohmann::json& j, Poi& p) {
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    p.cost = j.at("cost").get<double>();
    p.duration = j.at("duration").get<double>();
    p.topics = 0;
    for (int t : j.at("topics").get<std::vector<int>>()) {
        if (t < 0 || t >= kMaxTopics) throw std::invalid_argument("POI topic id out of range");
        p.topics |= (1U << t);
    }
    if (p.cost < 0.0 || p.duration < 0.0) throw std::invalid_argument("POI cost and duration must be non-negative");
}

nlohmann::json pois_to_json(const std::vector<Poi>& pois) { return nlohmann::json(pois); }

std::vector<Poi> pois_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("POI set must be a JSON array");
    auto pois = j.get<std::vector<Poi>>();
    if (pois.size() > static_cast<std::size_t>(kMaxPois)) throw std::invalid_argument("too many POIs");
    return pois;
}

std::vector<int> PoiSet::indices() const {
    std::vector<int> out;
    for (int w = 0; w < 2; ++w) {
        std::uint64_t bits = words_[static_cast<std::size_t>(w)];
        while (bits) {
            out.push_back(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

PoiSet PoiSet::from_indices(const std::vector<int>& idx) {
    PoiSet s;
    for (int i : idx) {
        if (i < 0 || i >= kMaxPois) throw std::invalid_argument("POI index out of range");
        s.insert(i);
    }
    return s;
}

double interest(const Poi& poi, std::uint32_t interested_topics) {
    const int n = std::popcount(poi.topics);
    return static_cast<double>(std::popcount(poi.topics & interested_topics)) / std::max(n, 1);
}

Config Config::full_scale() {
    Config c;
    c.n_pois = 100;
    c.n_topics = 20;
    return c;
}

std::vector<Poi> generate_pois(const Config& cfg, std::uint64_t seed) {
    if (cfg.n_pois < 1 || cfg.n_pois > kMaxPois) throw std::invalid_argument("n_pois out of range");
    if (cfg.n_topics < 1 || cfg.n_topics > kMaxTopics) throw std::invalid_argument("n_topics out of range");
    Rng rng(seed, Stream::instance);
    const TruncatedNormal coord{0.0, cfg.coord_sd, -cfg.coord_limit, cfg.coord_limit};
    const TruncatedNormal cost{cfg.cost_mean, cfg.cost_sd, 0.0, kInf};
    const TruncatedNormal duration{cfg.duration_mean, cfg.duration_sd, 0.0, cfg.duration_max};
    std::vector<Poi> pois(static_cast<std::size_t>(cfg.n_pois));
    for (auto& p : pois) {
        p.x = coord.sample(rng);
        p.y = coord.sample(rng);
        p.cost = cost.sample(rng);
        p.duration = duration.sample(rng);
        for (int t = 0; t < cfg.n_topics; ++t)
            if (rng.bernoulli(cfg.topic_rate)) p.topics |= (1U << t);
    }
    return pois;
}

Omega decode_omega(const ParameterSample& p, int n_topics) {
    if (p.omega.size() != static_cast<std::size_t>(n_topics) + 2) throw ContractViolation("day-trip omega has wrong size");
    Omega w;
    for (int t = 0; t < n_topics; ++t)
        if (p.omega[static_cast<std::size_t>(t)] > 0.5) w.topics |= (1U << t);
    w.mu_c = p.omega[static_cast<std::size_t>(n_topics)];
    w.sigma_c = p.omega[static_cast<std::size_t>(n_topics) + 1];
    return w;
}

Theta decode_theta(const ParameterSample& p) {
    if (p.theta.size() != 3) throw ContractViolation("day-trip theta has wrong size");
    return Theta{p.theta[0] > 0.5, p.theta[1], p.theta[2]};
}

ParameterSample encode(const Omega& w, const Theta& t, int n_topics) {
    ParameterSample p;
    for (int j = 0; j < n_topics; ++j) p.omega.push_back(((w.topics >> j) & 1U) ? 1.0 : 0.0);
    p.omega.push_back(w.mu_c);
    p.omega.push_back(w.sigma_c);
    p.theta = {t.anchoring ? 1.0 : 0.0, t.beta1, t.beta2};
    return p;
}

Daytrip::Daytrip(Config cfg, std::vector<Poi> pois) : cfg_(cfg), pois_(std::move(pois)) {
    if (pois_.empty() || pois_.size() > static_cast<std::size_t>(kMaxPois))
        throw std::invalid_argument("day trip needs between 1 and 128 POIs");
    if (cfg_.n_topics < 1 || cfg_.n_topics > kMaxTopics) throw std::invalid_argument("n_topics out of range");
    cfg_.n_pois = static_cast<int>(pois_.size());
}

std::vector<int> Daytrip::actions(const State& s) const {
    std::vector<int> out;
    const bool can_add = !over_duration(s);
    for (int i = 0; i < n_pois(); ++i)
        if (s.contains(i) || can_add) out.push_back(i);
    out.push_back(n_pois());
    return out;
}

Daytrip::State Daytrip::transition(const State& s, int a, Rng&) const {
    if (a < 0 || a > n_pois()) throw ContractViolation("day-trip action out of range");
    State next = s;
    if (a < n_pois()) next.toggle(a);
    return next;
}

double Daytrip::reward(const State& s, int, const State& next, const ParameterSample& p) const {
    const Omega w = decode_omega(p, cfg_.n_topics);
    return objective(next, w) - objective(s, w);
}

double Daytrip::objective(const State& s, const ParameterSample& p) const {
    return objective(s, decode_omega(p, cfg_.n_topics));
}

double Daytrip::objective(const State& s, const Omega& w) const {
    return enjoyment_score(s, w) * cost_score(total_cost(s), w);
}

double Daytrip::enjoyment_score(const State& s, const Omega& w) const {
    double sum = 0.0;
    for (int i : s.indices()) sum += pois_[static_cast<std::size_t>(i)].duration * interest(pois_[static_cast<std::size_t>(i)], w.topics);
    return sum / cfg_.max_minutes;
}

double Daytrip::cost_score(double total_cost, const Omega& w) const {
    if (w.sigma_c <= 0.0) return total_cost < w.mu_c ? 1.0 : 0.0;
    return TruncatedNormal{w.mu_c, w.sigma_c, 0.0, kInf}.survival(total_cost);
}

double Daytrip::total_cost(const State& s) const {
    double c = 0.0;
    for (int i : s.indices()) c += pois_[static_cast<std::size_t>(i)].cost;
    return c;
}

double Daytrip::visit_minutes(const State& s) const {
    double m = 0.0;
    for (int i : s.indices()) m += pois_[static_cast<std::size_t>(i)].duration;
    return m;
}

std::vector<Point> Daytrip::stop_points(const State& s, std::vector<int>& ids) const {
    ids = s.indices();
    std::vector<Point> pts;
    pts.reserve(ids.size());
    for (int i : ids) pts.push_back(pois_[static_cast<std::size_t>(i)].point());
    return pts;
}

namespace {

// Tour orders come back as indices into the stop list; map them to POI ids.
TripInfo make_trip(Tour tour, const std::vector<int>& ids, double visit, double minutes_per_km) {
    for (int& k : tour.order) k = ids[static_cast<std::size_t>(k)];
    TripInfo t;
    t.travel_minutes = tour.length_km * minutes_per_km;
    t.tour = std::move(tour);
    t.visit_minutes = visit;
    return t;
}

}  // namespace

TripInfo Daytrip::optimal_itinerary(const State& s) const {
    std::vector<int> ids;
    const auto pts = stop_points(s, ids);
    return make_trip(optimal_tour({}, pts, cfg_.exact_tsp_limit), ids, visit_minutes(s), 60.0 / cfg_.speed_kmh);
}

TripInfo Daytrip::heuristic_itinerary(const State& s) const { return heuristic_info(s)->trip; }

std::shared_ptr<const Daytrip::HeuristicInfo> Daytrip::heuristic_info(const State& s) const {
    {
        std::shared_lock lock(mutex_);
        if (auto it = heuristic_cache_.find(s); it != heuristic_cache_.end()) return it->second;
    }
    std::vector<int> ids;
    const auto pts = stop_points(s, ids);
    auto info = std::make_shared<HeuristicInfo>();
    const Tour tour = heuristic_tour({}, pts);
    for (int i = 0; i < n_pois(); ++i) {
        if (s.contains(i)) continue;
        if (distance_to_tour(pois_[static_cast<std::size_t>(i)].point(), {}, pts, tour.order) <= cfg_.anchoring_radius_km)
            info->near.insert(i);
    }
    info->trip = make_trip(tour, ids, visit_minutes(s), 60.0 / cfg_.speed_kmh);
    std::unique_lock lock(mutex_);
    return heuristic_cache_.emplace(s, std::move(info)).first->second;
}

bool Daytrip::over_duration(const State& s) const {
    {
        std::shared_lock lock(mutex_);
        if (auto it = over_cache_.find(s); it != over_cache_.end()) return it->second;
    }
    const double visit = visit_minutes(s);
    const double per_km = 60.0 / cfg_.speed_kmh;
    bool over;
    if (visit > cfg_.max_minutes) {
        over = true;
    } else {
        // Bracket the shortest tour by the hull perimeter and the heuristic
        // tour before paying for an exact solve.
        std::vector<int> ids;
        const auto pts = stop_points(s, ids);
        if (visit + hull_perimeter({}, pts) * per_km > cfg_.max_minutes)
            over = true;
        else if (heuristic_info(s)->trip.duration() <= cfg_.max_minutes)
            over = false;
        else
            over = visit + optimal_tour({}, pts, cfg_.exact_tsp_limit).length_km * per_km > cfg_.max_minutes;
    }
    std::unique_lock lock(mutex_);
    over_cache_.emplace(s, over);
    return over;
}

std::vector<int> Daytrip::agent_actions(const State& s, bool anchoring) const {
    const auto info = heuristic_info(s);
    const bool can_add = info->trip.duration() <= cfg_.max_minutes;
    std::vector<int> out;
    for (int i = 0; i < n_pois(); ++i) {
        if (s.contains(i))
            out.push_back(i);
        else if (can_add && (!anchoring || info->near.contains(i)))
            out.push_back(i);
    }
    out.push_back(n_pois());
    return out;
}

namespace {

// The agent's deterministic view: toggles with perceived durations and the
// anchoring filter. Objective terms are carried along so a step is O(1).
class AgentView {
public:
    struct State {
        PoiSet set;
        double enjoy = 0.0;  // sum of duration * interest
        double cost = 0.0;
        double f = 0.0;
    };

    AgentView(const Daytrip& d, const Omega& w, bool anchoring) : d_(&d), w_(w), anchoring_(anchoring) {
        for (const auto& p : d.pois()) {
            weighted_.push_back(p.duration * interest(p, w.topics));
            bound_ = std::max(bound_, weighted_.back() / d.config().max_minutes);
        }
    }

    State make(const PoiSet& s) const {
        State st{s, 0.0, 0.0, 0.0};
        for (int i : s.indices()) {
            st.enjoy += weighted_[static_cast<std::size_t>(i)];
            st.cost += d_->pois()[static_cast<std::size_t>(i)].cost;
        }
        st.f = value(st);
        return st;
    }

    std::vector<int> actions(const State& s) const { return d_->agent_actions(s.set, anchoring_); }

    std::pair<State, double> step(const State& s, int a) const {
        State next = s;
        if (a < d_->n_pois()) {
            const auto i = static_cast<std::size_t>(a);
            const double sign = s.set.contains(a) ? -1.0 : 1.0;
            next.set.toggle(a);
            next.enjoy += sign * weighted_[i];
            next.cost += sign * d_->pois()[i].cost;
            if (next.set.empty()) next.enjoy = next.cost = 0.0;
            next.f = value(next);
        }
        return {next, next.f - s.f};
    }

    double discount() const { return d_->config().agent_gamma; }
    double reward_bound() const { return bound_; }
    bool is_leaf_action(int a) const { return a == d_->n_pois(); }

private:
    double value(const State& s) const { return s.enjoy / d_->config().max_minutes * d_->cost_score(s.cost, w_); }

    const Daytrip* d_;
    Omega w_;
    bool anchoring_;
    std::vector<double> weighted_;
    double bound_ = 0.0;
};

}  // namespace

QEstimate Daytrip::agent_q(const State& s, const ParameterSample& p) const {
    const AgentView view(*this, decode_omega(p, cfg_.n_topics), decode_theta(p).anchoring);
    return bfs_q_estimate(view, view.make(s), cfg_.bfs_iterations, cfg_.bfs_depth);
}

AgentParams Daytrip::agent_params(const ParameterSample& p) const {
    const Theta t = decode_theta(p);
    return {t.beta1, t.beta2};
}

ParameterSample Daytrip::sample_true_params(Rng& rng, std::optional<bool> anchoring) const {
    Omega w;
    for (int t = 0; t < cfg_.n_topics; ++t)
        if (rng.bernoulli(cfg_.interest_rate)) w.topics |= (1U << t);
    w.mu_c = TruncatedNormal{cfg_.mu_c_mean, cfg_.mu_c_sd, 0.0, kInf}.sample(rng);
    w.sigma_c = cfg_.sigma_c;
    Theta th;
    const bool drawn = rng.bernoulli(cfg_.anchoring_rate);
    th.anchoring = anchoring.value_or(drawn);
    th.beta1 = rng.uniform(cfg_.beta1_lo, cfg_.beta1_hi);
    th.beta2 = cfg_.beta2_factor * th.beta1;
    return encode(w, th, cfg_.n_topics);
}

ParameterSample Daytrip::sample_belief_particle(Rng& rng, Config::BiasModel bias) const {
    ParameterSample p = sample_true_params(rng);
    Theta th = decode_theta(p);
    switch (bias) {
        case Config::BiasModel::infer: break;
        case Config::BiasModel::none: th.anchoring = false; break;
        case Config::BiasModel::always: th.anchoring = true; break;
    }
    if (cfg_.belief_beta1 > 0.0) {
        th.beta1 = cfg_.belief_beta1;
        th.beta2 = cfg_.beta2_factor * th.beta1;
    }
    return encode(decode_omega(p, cfg_.n_topics), th, cfg_.n_topics);
}

BeliefBinning Daytrip::binning() const {
    BeliefBinning b;
    b.omega.assign(static_cast<std::size_t>(cfg_.n_topics), ParamBinning::categorical());
    b.omega.push_back(ParamBinning::continuous(cfg_.mu_c_mean - 4 * cfg_.mu_c_sd, cfg_.mu_c_mean + 4 * cfg_.mu_c_sd));
    b.omega.push_back(ParamBinning::categorical());
    b.theta = {ParamBinning::categorical(), ParamBinning::continuous(cfg_.beta1_lo, cfg_.beta1_hi),
               ParamBinning::continuous(cfg_.beta2_factor * cfg_.beta1_lo, cfg_.beta2_factor * cfg_.beta1_hi)};
    return b;
}

Daytrip::State Daytrip::random_trip(Rng& rng) const {
    State s;
    const int steps = 5 + static_cast<int>(rng.index(11));
    for (int k = 0; k < steps; ++k) {
        auto acts = actions(s);
        acts.pop_back();  // NOOP
        s.toggle(acts[rng.index(acts.size())]);
    }
    return s;
}

nlohmann::json Daytrip::state_json(const State& s) const {
    const TripInfo trip = optimal_itinerary(s);
    return {{"selected", s.indices()},
            {"itinerary", trip.tour.order},
            {"travel_minutes", trip.travel_minutes},
            {"visit_minutes", trip.visit_minutes},
            {"duration_minutes", trip.duration()},
            {"cost", total_cost(s)},
            {"over_duration", over_duration(s)}};
}

Daytrip::State Daytrip::state_from_json(const nlohmann::json& j) const {
    const auto& sel = j.is_array() ? j : j.at("selected");
    State s = PoiSet::from_indices(sel.get<std::vector<int>>());
    for (int i : s.indices())
        if (i >= n_pois()) throw std::invalid_argument("selected POI index out of range");
    return s;
}

}  // namespace aiad::daytrip
