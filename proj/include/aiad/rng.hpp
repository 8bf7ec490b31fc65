#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aiad {

/// SplitMix64 finalizer. Used both for seed derivation and for digests.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ (mix64(v) + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2)));
}

/// Named sub-streams of a run seed. Every consumer of randomness draws from
/// its own stream so that e.g. extra planner iterations never shift the
/// demand realizations.
enum class Stream : std::uint64_t {
    instance = 1,
    true_params,
    belief_prior,
    environment,
    agent,
    planner,
    subsample,
    query,
    run,
};

/// Counter-based split: a child seed is a pure function of (parent, tags).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(parent);
    for (auto t : tags) h = hash_combine(h, t);
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, Stream s, std::uint64_t counter = 0) noexcept {
    return derive_seed(parent, {static_cast<std::uint64_t>(s), counter});
}

class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t parent, Stream s, std::uint64_t counter = 0) : engine_(derive_seed(parent, s, counter)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mu, double sigma) { return std::normal_distribution<double>(mu, sigma)(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace aiad
