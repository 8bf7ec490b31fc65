#include "aiad/belief.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace aiad {

ParticleBelief::ParticleBelief(std::vector<ParameterSample> particles, std::vector<double> weights)
    : particles_(std::move(particles)), weights_(std::move(weights)) {
    if (particles_.empty()) throw ContractViolation("ParticleBelief: no particles");
    if (particles_.size() != weights_.size()) throw ContractViolation("ParticleBelief: weight count mismatch");
    const double z = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (!(z > 0.0)) throw ContractViolation("ParticleBelief: weights must have positive mass");
    for (auto& w : weights_) {
        if (w < 0.0) throw ContractViolation("ParticleBelief: negative weight");
        w /= z;
    }
}

std::size_t ParticleBelief::draw(Rng& rng) const {
    double u = rng.uniform();
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        u -= weights_[i];
        if (u < 0.0) return i;
    }
    for (std::size_t i = weights_.size(); i-- > 0;)
        if (weights_[i] > 0.0) return i;
    return weights_.size() - 1;
}

ParticleBelief::UpdateStatus ParticleBelief::update(const std::function<double(const ParameterSample&)>& likelihood) {
    std::vector<double> next(weights_.size());
    double z = 0.0;
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        next[i] = weights_[i] > 0.0 ? weights_[i] * likelihood(particles_[i]) : 0.0;
        z += next[i];
    }
    if (!(z > 0.0)) {
        ++degenerate_updates_;
        return UpdateStatus::degenerate;
    }
    for (auto& w : next) w /= z;
    weights_ = std::move(next);
    return UpdateStatus::updated;
}

namespace {
std::vector<double> weighted_mean(const ParticleBelief& b, bool omega) {
    const auto& first = omega ? b.particle(0).omega : b.particle(0).theta;
    std::vector<double> mean(first.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& v = omega ? b.particle(i).omega : b.particle(i).theta;
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += b.weight(i) * v[k];
    }
    return mean;
}
}  // namespace

std::vector<double> ParticleBelief::mean_omega() const { return weighted_mean(*this, true); }
std::vector<double> ParticleBelief::mean_theta() const { return weighted_mean(*this, false); }

nlohmann::json ParticleBelief::snapshot() const {
    return nlohmann::json{{"particles", particles_}, {"weights", weights_}, {"degenerate_updates", degenerate_updates_}};
}

ParticleBelief ParticleBelief::from_snapshot(const nlohmann::json& j) {
    auto weights = j.at("weights").get<std::vector<double>>();
    ParticleBelief b(j.at("particles").get<std::vector<ParameterSample>>(), weights);
    // Keep the stored weights bit for bit rather than renormalizing them.
    b.weights_ = std::move(weights);
    b.degenerate_updates_ = j.value("degenerate_updates", 0);
    return b;
}

ParticleBelief init_belief(const PriorSampler& prior, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ContractViolation("init_belief: n must be >= 1");
    Rng rng(seed, Stream::belief_prior);
    std::vector<ParameterSample> particles;
    particles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) particles.push_back(prior(rng));
    return ParticleBelief(std::move(particles), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ParticleBelief subsample(const ParticleBelief& belief, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw ContractViolation("subsample: m must be >= 1");
    Rng rng(seed, Stream::subsample);
    std::vector<ParameterSample> particles;
    particles.reserve(m);
    for (std::size_t i = 0; i < m; ++i) particles.push_back(belief.particle(belief.draw(rng)));
    return ParticleBelief(std::move(particles), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

namespace {
long bin_index(const ParamBinning& b, double x) {
    if (b.kind == ParamBinning::Kind::categorical) return std::lround(x * 1e6);
    if (b.bins <= 1 || b.hi <= b.lo) return 0;
    const double t = (x - b.lo) / (b.hi - b.lo);
    return std::clamp(static_cast<long>(std::floor(t * b.bins)), 0L, static_cast<long>(b.bins - 1));
}
}  // namespace

double posterior_entropy(const ParticleBelief& belief, const BeliefBinning& bins) {
    std::map<std::vector<long>, double> hist;
    for (std::size_t i = 0; i < belief.size(); ++i) {
        const auto& p = belief.particle(i);
        if (p.omega.size() != bins.omega.size() || p.theta.size() != bins.theta.size())
            throw ContractViolation("posterior_entropy: binning does not match parameter layout");
        std::vector<long> key;
        key.reserve(p.omega.size() + p.theta.size());
        for (std::size_t k = 0; k < p.omega.size(); ++k) key.push_back(bin_index(bins.omega[k], p.omega[k]));
        for (std::size_t k = 0; k < p.theta.size(); ++k) key.push_back(bin_index(bins.theta[k], p.theta[k]));
        hist[key] += belief.weight(i);
    }
    double h = 0.0;
    for (const auto& [_, w] : hist)
        if (w > 0.0) h -= w * std::log(w);
    return std::max(0.0, h);
}

double weight_entropy(std::span<const double> weights) {
    double h = 0.0;
    for (double w : weights)
        if (w > 0.0) h -= w * std::log(w);
    return std::max(0.0, h);
}

double reward_error(const ParticleBelief& belief, std::span<const double> true_omega) {
    const auto mean = belief.mean_omega();
    if (mean.size() != true_omega.size()) throw ContractViolation("reward_error: omega size mismatch");
    if (mean.empty()) return 0.0;
    double err = 0.0;
    for (std::size_t k = 0; k < mean.size(); ++k) err += std::abs(mean[k] - true_omega[k]);
    return err / static_cast<double>(mean.size());
}

}  // namespace aiad
