#include "aiad/stats.hpp"

#include "aiad/decision.hpp"
#include "aiad/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aiad {

namespace {

struct Ranked {
    std::vector<double> ranks;  // ranks of |d|, ties averaged
    std::vector<double> diffs;
};

Ranked rank_differences(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ContractViolation("wilcoxon: samples must be paired");
    Ranked r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) r.diffs.push_back(d);
    }
    const std::size_t n = r.diffs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::fabs(r.diffs[a]) < std::fabs(r.diffs[b]); });
    r.ranks.assign(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(r.diffs[idx[j + 1]]) == std::fabs(r.diffs[idx[i]])) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r.ranks[idx[k]] = mean_rank;
        i = j + 1;
    }
    return r;
}

// P(W+ <= w) and P(W+ >= w) under the null by dynamic programming over
// doubled ranks, so averaged tie ranks stay integral.
std::pair<double, double> exact_tails(const std::vector<double>& ranks, double w_plus) {
    std::vector<long> doubled;
    long total = 0;
    for (double r : ranks) {
        doubled.push_back(std::lround(2.0 * r));
        total += doubled.back();
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : doubled) {
        reach += r;
        for (long s = reach; s >= r; --s) count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(ranks.size()));
    const long w2 = std::lround(2.0 * w_plus);
    double lower = 0.0, upper = 0.0;
    for (long s = 0; s <= total; ++s) {
        if (s <= w2) lower += count[static_cast<std::size_t>(s)];
        if (s >= w2) upper += count[static_cast<std::size_t>(s)];
    }
    return {lower / all, upper / all};
}

// Normal approximation for P(W+ <= w) and P(W+ >= w).
std::pair<double, double> normal_tails(const std::vector<double>& ranks, double w_plus) {
    const double n = static_cast<double>(ranks.size());
    const double mean = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // Tie correction: subtract sum(t^3 - t) / 48 over tie groups.
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        var -= (t * t * t - t) / 48.0;
        i = j;
    }
    const double sd = std::sqrt(std::max(var, 1e-300));
    const double lower = normal_cdf((w_plus - mean + 0.5) / sd);
    const double upper = 1.0 - normal_cdf((w_plus - mean - 0.5) / sd);
    return {lower, upper};
}

struct Tails {
    double w_plus = 0.0;
    double w_minus = 0.0;
    double lower = 1.0;
    double upper = 1.0;
    int n = 0;
    bool exact = true;
};

Tails tails(std::span<const double> x, std::span<const double> y, int exact_limit) {
    const Ranked r = rank_differences(x, y);
    Tails t;
    t.n = static_cast<int>(r.diffs.size());
    for (std::size_t i = 0; i < r.diffs.size(); ++i) (r.diffs[i] > 0 ? t.w_plus : t.w_minus) += r.ranks[i];
    if (t.n == 0) return t;
    t.exact = t.n <= exact_limit;
    std::tie(t.lower, t.upper) = t.exact ? exact_tails(r.ranks, t.w_plus) : normal_tails(r.ranks, t.w_plus);
    return t;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, int exact_limit) {
    const Tails t = tails(x, y, exact_limit);
    WilcoxonResult res;
    res.n = t.n;
    res.exact = t.exact;
    res.statistic = std::min(t.w_plus, t.w_minus);
    res.p_value = t.n == 0 ? 1.0 : std::min(1.0, 2.0 * std::min(t.lower, t.upper));
    return res;
}

WilcoxonResult wilcoxon_greater(std::span<const double> x, std::span<const double> y, int exact_limit) {
    const Tails t = tails(x, y, exact_limit);
    WilcoxonResult res;
    res.n = t.n;
    res.exact = t.exact;
    res.statistic = t.w_plus;
    res.p_value = t.n == 0 ? 1.0 : std::min(1.0, t.upper);
    return res;
}

MeanSe mean_se(std::span<const double> v) {
    MeanSe m;
    m.n = static_cast<int>(v.size());
    if (v.empty()) return m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return m;
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
    return m;
}

}  // namespace aiad
