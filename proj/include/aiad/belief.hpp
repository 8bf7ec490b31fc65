#pragma once

#include "aiad/decision.hpp"
#include "aiad/rng.hpp"

#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

namespace aiad {

/// Weighted particle filter over joint (omega, theta). Particles are fixed at
/// construction; only the weights move.
class ParticleBelief {
public:
    ParticleBelief() = default;
    ParticleBelief(std::vector<ParameterSample> particles, std::vector<double> weights);

    std::size_t size() const { return particles_.size(); }
    const std::vector<ParameterSample>& particles() const { return particles_; }
    const std::vector<double>& weights() const { return weights_; }
    const ParameterSample& particle(std::size_t i) const { return particles_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    /// Index drawn proportionally to the weights.
    std::size_t draw(Rng& rng) const;

    /// Number of updates that carried no evidence (all likelihoods zero).
    int degenerate_updates() const { return degenerate_updates_; }

    enum class UpdateStatus { updated, degenerate };

    /// w_i <- w_i * likelihood(particle_i), renormalized. If every likelihood
    /// is zero the weights are kept and `degenerate` is reported.
    UpdateStatus update(const std::function<double(const ParameterSample&)>& likelihood);

    std::vector<double> mean_omega() const;
    std::vector<double> mean_theta() const;

    nlohmann::json snapshot() const;
    static ParticleBelief from_snapshot(const nlohmann::json& j);

private:
    std::vector<ParameterSample> particles_;
    std::vector<double> weights_;
    int degenerate_updates_ = 0;
};

using PriorSampler = std::function<ParameterSample(Rng&)>;

/// n i.i.d. prior draws with uniform weights.
ParticleBelief init_belief(const PriorSampler& prior, std::size_t n, std::uint64_t seed);

/// m draws with replacement proportional to weight, reweighted uniformly.
ParticleBelief subsample(const ParticleBelief& belief, std::size_t m, std::uint64_t seed);

/// Binning of one parameter for histogram entropy.
struct ParamBinning {
    enum class Kind { continuous, categorical };
    Kind kind = Kind::categorical;
    double lo = 0.0;
    double hi = 1.0;
    int bins = 16;

    static ParamBinning categorical() { return {Kind::categorical, 0, 0, 0}; }
    static ParamBinning continuous(double lo, double hi, int bins = 16) { return {Kind::continuous, lo, hi, bins}; }
};

/// Bin layout covering omega then theta, in that order.
struct BeliefBinning {
    std::vector<ParamBinning> omega;
    std::vector<ParamBinning> theta;
};

/// Shannon entropy (nats) of the weighted joint histogram of the particles.
double posterior_entropy(const ParticleBelief& belief, const BeliefBinning& bins);

/// Entropy (nats) of the particle weights themselves.
double weight_entropy(std::span<const double> weights);

/// Mean absolute error between the posterior-mean omega and `true_omega`.
double reward_error(const ParticleBelief& belief, std::span<const double> true_omega);

}  // namespace aiad
