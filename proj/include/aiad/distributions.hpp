#pragma once

#include "aiad/rng.hpp"

#include <cmath>
#include <limits>

namespace aiad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Numerically stable logistic function.
inline double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// Normal(mu, sigma) truncated to [lo, hi]; either bound may be infinite.
struct TruncatedNormal {
    double mu = 0.0;
    double sigma = 1.0;
    double lo = -kInf;
    double hi = kInf;

    /// Probability mass of the untruncated normal inside [lo, hi].
    double mass() const;
    double cdf(double x) const;
    /// 1 - cdf, computed without cancellation in the upper tail.
    double survival(double x) const;
    double sample(Rng& rng) const;
};

double sample_beta(Rng& rng, double a, double b);
double sample_chi_squared(Rng& rng, double dof);

}  // namespace aiad
