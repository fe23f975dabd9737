#ifndef MRL_TESTS_GEWEKE_HPP
#define MRL_TESTS_GEWEKE_HPP

// Geweke-style sampler validation: marginal moments from (a) prior-only
// simulation and (b) successive-conditional simulation (full Gibbs sweep,
// then a fresh data set drawn from the model) must agree.

#include <cmath>
#include <vector>

#include "mrl/gibbs.hpp"
#include "mrl/rng.hpp"
#include "support/stats.hpp"

namespace geweke {

struct Tracks {
    std::vector<double> mu1, sigma11, alpha;
};

inline mrl::ChainState draw_prior_state(const mrl::Hyperparams& priors, int truncation,
                                        mrl::RngStream& rng) {
    mrl::ChainState state;
    const std::size_t L = static_cast<std::size_t>(truncation);
    state.alpha = rng.gamma(priors.a_alpha, priors.b_alpha);
    state.mu = rng.normal2(priors.a_mu, priors.b_mu);
    state.sigma = rng.inv_wishart(priors.a_sigma, priors.b_sigma);
    state.sticks.resize(L - 1);
    for (double& v : state.sticks) v = rng.beta(1.0, state.alpha);
    state.mix.weights = mrl::stick_break(state.sticks);
    state.mix.atoms.resize(L);
    for (auto& a : state.mix.atoms) a = rng.normal2(state.mu, state.sigma);
    return state;
}

// censor_time <= 0 disables censoring; otherwise fixed-time right censoring
// is part of the generative model
inline void redraw_data(mrl::ChainState& state, mrl::Dataset& data, mrl::RngStream& rng,
                        double censor_time = 0.0) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int w = rng.categorical(state.mix.weights);
        state.labels[i] = w;
        const auto& atom = state.mix.atoms[static_cast<std::size_t>(w)];
        double t = rng.gamma(std::exp(atom.x), std::exp(atom.y));
        std::uint8_t censored = 0;
        if (censor_time > 0.0 && t > censor_time) {
            t = censor_time;
            censored = 1;
        }
        data.time[i] = t;
        data.censored[i] = censored;
    }
}

inline Tracks prior_only(const mrl::Hyperparams& priors, int truncation, int n_samples,
                         mrl::RngStream& rng) {
    Tracks t;
    for (int k = 0; k < n_samples; ++k) {
        const auto s = draw_prior_state(priors, truncation, rng);
        t.mu1.push_back(s.mu.x);
        t.sigma11.push_back(s.sigma.m00);
        t.alpha.push_back(s.alpha);
    }
    return t;
}

inline Tracks successive_conditional(const mrl::Hyperparams& priors, int truncation,
                                     std::size_t n_obs, int n_samples, const mrl::Mat2& s2,
                                     double proposal_c, mrl::RngStream& rng,
                                     double censor_time = 0.0) {
    mrl::ChainState state = draw_prior_state(priors, truncation, rng);
    mrl::Dataset data;
    data.time.assign(n_obs, 1.0);
    data.censored.assign(n_obs, 0);
    state.labels.assign(n_obs, 0);
    redraw_data(state, data, rng, censor_time);

    Tracks t;
    for (int k = 0; k < n_samples; ++k) {
        mrl::gibbs_sweep(state, data, priors, proposal_c, s2, rng);
        redraw_data(state, data, rng, censor_time);
        t.mu1.push_back(state.mu.x);
        t.sigma11.push_back(state.sigma.m00);
        t.alpha.push_back(state.alpha);
    }
    return t;
}

// z-scores between the two arms; the correlated arm uses batch-means errors
inline std::vector<double> compare(const Tracks& prior, const Tracks& chain) {
    auto z = [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto ma = teststat::moments(a);
        const double se_a = ma.se_mean();
        const double se_b = teststat::batch_means_se(b);
        const auto mb = teststat::moments(b);
        return std::fabs(ma.mean - mb.mean) / std::sqrt(se_a * se_a + se_b * se_b);
    };
    auto squared = [](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * v[i];
        return out;
    };
    return {z(prior.mu1, chain.mu1),
            z(prior.sigma11, chain.sigma11),
            z(prior.alpha, chain.alpha),
            z(squared(prior.mu1), squared(chain.mu1)),
            z(squared(prior.alpha), squared(chain.alpha))};
}

}  // namespace geweke

#endif
