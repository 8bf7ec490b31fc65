#pragma once

#include <span>
#include <vector>

namespace aiad {

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;    // two-sided
    int n = 0;               // non-zero differences used
    bool exact = true;
};

/// Paired Wilcoxon signed-rank test on x - y. Zero differences are dropped
/// and tied |d| share their mean rank. Exact null distribution for n <= 25,
/// normal approximation with continuity and tie correction above. With no
/// non-zero differences the result is p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, int exact_limit = 25);

/// One-sided variant testing whether x tends to exceed y.
WilcoxonResult wilcoxon_greater(std::span<const double> x, std::span<const double> y, int exact_limit = 25);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // sample sd / sqrt(n)
    int n = 0;
};
MeanSe mean_se(std::span<const double> v);

}  // namespace aiad
