#include "aiad/modes.hpp"

#include <stdexcept>

namespace aiad {

namespace {
constexpr const char* kModeNames[] = {"aiad",          "aiad_automation", "unassisted", "irl_automation",
                                      "pl_automation", "partial_automation", "oracle"};
}

std::string to_string(ModeKind k) { return kModeNames[static_cast<int>(k)]; }

ModeKind mode_kind_from_string(const std::string& s) {
    for (int i = 0; i < 7; ++i)
        if (s == kModeNames[i]) return static_cast<ModeKind>(i);
    throw std::invalid_argument("unknown mode: " + s);
}

double expected_information_gain(const std::vector<double>& weights, const std::vector<double>& p_first) {
    if (weights.size() != p_first.size()) throw ContractViolation("expected_information_gain: size mismatch");
    double p1 = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) p1 += weights[i] * p_first[i];
    const double h0 = weight_entropy(weights);
    std::vector<double> post(weights.size());
    double expected = 0.0;
    for (int answer = 0; answer < 2; ++answer) {
        const double pa = answer == 0 ? p1 : 1.0 - p1;
        if (pa <= 0.0) continue;
        for (std::size_t i = 0; i < weights.size(); ++i)
            post[i] = weights[i] * (answer == 0 ? p_first[i] : 1.0 - p_first[i]) / pa;
        expected += pa * weight_entropy(post);
    }
    return h0 - expected;
}

}  // namespace aiad
