#include "aiad/planner.hpp"

#include <limits>

namespace aiad {

std::string to_string(const AssistantAction& a) {
    switch (a.kind) {
        case AssistKind::advise: return "advise(" + std::to_string(a.action) + ")";
        case AssistKind::act: return "act(" + std::to_string(a.action) + ")";
        case AssistKind::yield: return "yield";
    }
    return "?";
}

void to_json(nlohmann::json& j, const AssistantAction& a) {
    static const char* kinds[] = {"advise", "act", "yield"};
    j = nlohmann::json{{"kind", kinds[static_cast<int>(a.kind)]}};
    if (a.kind != AssistKind::yield) j["action"] = a.action;
}

void to_json(nlohmann::json& j, const PlannerConfig& c) {
    j = nlohmann::json{{"gamma", c.gamma},         {"max_depth", c.max_depth}, {"n_iterations", c.n_iterations},
                       {"c", c.c},                 {"subsample", c.subsample}};
    if (c.time_limit_seconds) j["time_limit_seconds"] = *c.time_limit_seconds;
}

void from_json(const nlohmann::json& j, PlannerConfig& c) {
    c.gamma = j.value("gamma", c.gamma);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.n_iterations = j.value("n_iterations", c.n_iterations);
    c.c = j.value("c", c.c);
    c.subsample = j.value("subsample", c.subsample);
    if (j.contains("time_limit_seconds") && !j["time_limit_seconds"].is_null())
        c.time_limit_seconds = j["time_limit_seconds"].get<double>();
    if (c.gamma <= 0.0 || c.gamma > 1.0) throw std::invalid_argument("planner gamma must be in (0, 1]");
    if (c.max_depth < 1 || c.n_iterations < 1 || c.c < 0.0)
        throw std::invalid_argument("planner depth/iterations must be positive and c non-negative");
}

std::size_t uct_select(const TreeNode& node, double c) {
    if (node.actions.empty()) throw ContractViolation("uct_select: node has no actions");
    for (std::size_t i = 0; i < node.counts.size(); ++i)
        if (node.counts[i] == 0) return i;
    const double log_n = std::log(static_cast<double>(node.visits));
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < node.counts.size(); ++i) {
        const double v = node.q[i] + c * std::sqrt(log_n / node.counts[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

std::size_t greedy_index(const TreeNode& node) {
    if (node.actions.empty()) throw ContractViolation("greedy_index: node has no actions");
    std::size_t best = 0;
    for (std::size_t i = 1; i < node.q.size(); ++i)
        if (node.q[i] > node.q[best]) best = i;
    return best;
}

nlohmann::json PlanResult::telemetry() const {
    nlohmann::json table = nlohmann::json::array();
    for (std::size_t i = 0; i < root_actions.size(); ++i)
        table.push_back({{"action", root_actions[i]}, {"q", root_q[i]}, {"n", root_counts[i]}});
    return {{"chosen", action},
            {"iterations", iterations},
            {"iterations_per_second", seconds > 0 ? iterations / seconds : 0.0},
            {"root", table}};
}

}  // namespace aiad
