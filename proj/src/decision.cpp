#include "aiad/decision.hpp"

namespace aiad {

namespace {
std::uint64_t digest_vector(const std::vector<double>& v, std::uint64_t salt) {
    std::uint64_t h = mix64(salt ^ v.size());
    for (double x : v) h = hash_combine(h, std::bit_cast<std::uint64_t>(x));
    return h;
}
}  // namespace

std::uint64_t ParameterSample::omega_digest() const { return digest_vector(omega, 0x6f6d656761ULL); }
std::uint64_t ParameterSample::theta_digest() const { return digest_vector(theta, 0x7468657461ULL); }

void to_json(nlohmann::json& j, const ParameterSample& p) { j = nlohmann::json{{"omega", p.omega}, {"theta", p.theta}}; }

void from_json(const nlohmann::json& j, ParameterSample& p) {
    j.at("omega").get_to(p.omega);
    j.at("theta").get_to(p.theta);
}

double discounted_return(std::span<const double> rewards, double gamma) {
    double total = 0.0;
    double discount = 1.0;
    for (double r : rewards) {
        total += discount * r;
        discount *= gamma;
    }
    return total;
}

std::string to_string(StepKind k) {
    switch (k) {
        case StepKind::agent: return "agent";
        case StepKind::advise: return "advise";
        case StepKind::act: return "act";
        case StepKind::yield: return "yield";
        case StepKind::query: return "query";
        case StepKind::reset: return "reset";
    }
    return "agent";
}

StepKind step_kind_from_string(const std::string& s) {
    for (auto k : {StepKind::agent, StepKind::advise, StepKind::act, StepKind::yield, StepKind::query, StepKind::reset})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown step kind: " + s);
}

}  // namespace aiad
