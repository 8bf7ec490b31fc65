#include "aiad/distributions.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace aiad {

namespace {
double upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
}  // namespace

double TruncatedNormal::mass() const {
    const double a = (lo - mu) / sigma;
    const double b = (hi - mu) / sigma;
    // Use whichever tail formulation keeps precision.
    if (a > 0) return upper_tail(a) - upper_tail(b);
    return normal_cdf(b) - normal_cdf(a);
}

double TruncatedNormal::cdf(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return 1.0 - survival(x);
}

double TruncatedNormal::survival(double x) const {
    if (x <= lo) return 1.0;
    if (x >= hi) return 0.0;
    const double z = (x - mu) / sigma;
    const double b = (hi - mu) / sigma;
    const double s = upper_tail(z) - upper_tail(b);
    return std::clamp(s / mass(), 0.0, 1.0);
}

double TruncatedNormal::sample(Rng& rng) const {
    if (!(lo < hi)) throw std::invalid_argument("truncated normal: empty support");
    if (sigma == 0.0) return std::clamp(mu, lo, hi);
    if (mass() < 1e-4) throw std::invalid_argument("truncated normal: truncation too extreme for rejection sampling");
    std::normal_distribution<double> dist(mu, sigma);
    for (;;) {
        const double x = dist(rng.engine());
        if (x >= lo && x <= hi) return x;
    }
}

double sample_beta(Rng& rng, double a, double b) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng.engine());
    const double y = gb(rng.engine());
    return x / (x + y);
}

double sample_chi_squared(Rng& rng, double dof) {
    return std::chi_squared_distribution<double>(dof)(rng.engine());
}

}  // namespace aiad
