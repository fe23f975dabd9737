#ifndef MRL_GIBBS_HPP
#define MRL_GIBBS_HPP

// Blocked Gibbs sampler for the truncated gamma DP mixture with right
// censoring. Sweep order: atoms (MH), weights (latent sticks), labels,
// then (mu, Sigma, alpha). Atom and label updates visit components and
// observations in fixed order so a seed reproduces the run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrl/mat2.hpp"
#include "mrl/mixture.hpp"
#include "mrl/rng.hpp"
#include "mrl/special.hpp"

namespace mrl {

// delta = 0 observed, delta = 1 right-censored
struct Dataset {
    std::vector<double> time;
    std::vector<std::uint8_t> censored;
    std::string group = "all";

    std::size_t size() const { return time.size(); }

    void validate() const {
        if (censored.size() != time.size())
            throw std::invalid_argument("Dataset: time/censored size mismatch");
        for (std::size_t i = 0; i < time.size(); ++i) {
            if (!(time[i] > 0.0) || !std::isfinite(time[i]))
                throw std::invalid_argument("Dataset: times must be positive and finite");
            if (censored[i] > 1)
                throw std::invalid_argument("Dataset: censoring indicator must be 0 or 1");
        }
    }
};

struct ChainState {
    MixtureParams mix;           // weights + atoms
    std::vector<double> sticks;  // latent V_1..V_{L-1}
    std::vector<int> labels;     // one component index per observation
    Vec2 mu;
    Mat2 sigma;
    double alpha = 1.0;

    std::size_t truncation() const { return mix.size(); }
};

struct ChainConfig {
    int truncation = 40;       // L
    int burn_in = 5000;
    int thin = 5;
    int n_save = 2000;
    int pilot_iters = 500;
    double proposal_c = 2.0;   // proposal covariance multiplier, > 1
    double survival_floor = 1e-10;
    std::uint64_t seed = 42;

    void validate() const {
        if (truncation < 1 || burn_in < 0 || thin < 1 || n_save < 1 || pilot_iters < 0)
            throw std::invalid_argument("ChainConfig: invalid sampler settings");
        if (!(proposal_c > 1.0))
            throw std::invalid_argument("ChainConfig: proposal_c must exceed 1");
    }
};

struct SavedDraw {
    double alpha;
    Vec2 mu;
    Mat2 sigma;
    std::vector<double> weights;
    std::vector<Vec2> atoms;
    std::vector<int> labels;
};

struct PosteriorDraws {
    std::vector<SavedDraw> draws;
    double atom_accept_rate = 0.0;
    Mat2 proposal_s2;  // adapted during the pilot phase, frozen for the run
    ChainConfig config;
};

// ---------------------------------------------------------------------------
// likelihood pieces
// ---------------------------------------------------------------------------

// log of [gamma density]^{1-delta} [gamma survival]^{delta} at one observation
inline double log_obs_factor(double t, bool is_censored, double theta, double phi) {
    if (is_censored) return log_gamma_q(std::exp(theta), std::exp(phi) * t);
    return gamma_log_pdf(t, theta, phi);
}

inline double log_normal2_density(const Vec2& x, const Vec2& mean, const Mat2& cov) {
    const Mat2 inv = cov.inverse();
    const Vec2 d = x - mean;
    const double quad = quad_form(d, inv, d);
    return -std::log(2.0 * M_PI) - 0.5 * std::log(cov.det()) - 0.5 * quad;
}

// log posterior of one active atom: bivariate-normal baseline times the
// member observations' density/survival factors
inline double log_atom_posterior(const Vec2& atom, const Vec2& mu, const Mat2& sigma,
                                 const Dataset& data, const std::vector<int>& labels,
                                 int component) {
    double lp = log_normal2_density(atom, mu, sigma);
    for (std::size_t i = 0; i < data.size(); ++i)
        if (labels[i] == component)
            lp += log_obs_factor(data.time[i], data.censored[i] != 0, atom.x, atom.y);
    return lp;
}

// ---------------------------------------------------------------------------
// individual Gibbs updates
// ---------------------------------------------------------------------------

struct MhCounters {
    long proposed = 0;
    long accepted = 0;
    double rate() const { return proposed > 0 ? double(accepted) / double(proposed) : 0.0; }
};

// Inactive components are refreshed from the baseline N2(mu, Sigma); active
// components move by a random-walk MH step with proposal N2(current,
// c S2 / (1 + M_l)). The member-count scaling keeps the step size near the
// conditional posterior scale of heavily populated components; the proposal
// stays symmetric, so the plain MH ratio applies.
inline void update_atoms(ChainState& state, const Dataset& data, double proposal_c,
                         const Mat2& s2, RngStream& rng, MhCounters* counters = nullptr) {
    const std::size_t L = state.truncation();
    std::vector<int> members(L, 0);
    for (int w : state.labels) ++members[static_cast<std::size_t>(w)];
    for (std::size_t l = 0; l < L; ++l) {
        if (members[l] == 0) {
            state.mix.atoms[l] = rng.normal2(state.mu, state.sigma);
            continue;
        }
        const Vec2 current = state.mix.atoms[l];
        const Mat2 prop_cov = s2 * (proposal_c / (1.0 + members[l]));
        const Vec2 proposal = rng.normal2(current, prop_cov);
        const double lp_cur = log_atom_posterior(current, state.mu, state.sigma, data,
                                                 state.labels, static_cast<int>(l));
        const double lp_prop = log_atom_posterior(proposal, state.mu, state.sigma, data,
                                                  state.labels, static_cast<int>(l));
        if (counters) ++counters->proposed;
        if (std::log(rng.uniform()) < lp_prop - lp_cur) {
            state.mix.atoms[l] = proposal;
            if (counters) ++counters->accepted;
        }
    }
}

// V_l ~ Beta(1 + M_l, alpha + sum_{r>l} M_r); weights rebuilt by stick
// breaking with the last one taken by subtraction.
inline void update_weights(ChainState& state, RngStream& rng) {
    const std::size_t L = state.truncation();
    std::vector<double> counts(L, 0.0);
    for (int w : state.labels) counts[static_cast<std::size_t>(w)] += 1.0;
    std::vector<double> tail(L + 1, 0.0);
    for (std::size_t l = L; l-- > 0;) tail[l] = tail[l + 1] + counts[l];

    state.sticks.resize(L > 0 ? L - 1 : 0);
    for (std::size_t l = 0; l + 1 < L; ++l)
        state.sticks[l] = rng.beta(1.0 + counts[l], state.alpha + tail[l + 1]);
    state.mix.weights = stick_break(state.sticks);
}

// w_i ~ categorical over components, weights p_l * [density]^{1-delta} *
// [survival]^{delta}, normalized in log space.
inline void update_labels(ChainState& state, const Dataset& data, RngStream& rng) {
    const std::size_t L = state.truncation();
    std::vector<double> logw(L);
    std::vector<double> w(L);
    for (std::size_t i = 0; i < data.size(); ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < L; ++l) {
            const double lw = state.mix.weights[l] > 0.0
                                  ? std::log(state.mix.weights[l]) +
                                        log_obs_factor(data.time[i], data.censored[i] != 0,
                                                       state.mix.atoms[l].x, state.mix.atoms[l].y)
                                  : -std::numeric_limits<double>::infinity();
            logw[l] = lw;
            if (lw > mx) mx = lw;
        }
        if (!std::isfinite(mx))
            throw std::runtime_error("update_labels: all component weights vanished at t = " +
                                     std::to_string(data.time[i]));
        for (std::size_t l = 0; l < L; ++l) w[l] = std::exp(logw[l] - mx);
        state.labels[i] = rng.categorical(w);
    }
}

// mu, Sigma, alpha in sequence. Only distinct active atoms enter the mu and
// Sigma conditionals; alpha uses the current sticks.
inline void update_hypers(ChainState& state, const Hyperparams& priors, RngStream& rng) {
    const std::size_t L = state.truncation();
    std::vector<bool> active(L, false);
    for (int w : state.labels) active[static_cast<std::size_t>(w)] = true;
    int n_star = 0;
    Vec2 atom_sum{0.0, 0.0};
    for (std::size_t l = 0; l < L; ++l) {
        if (active[l]) {
            ++n_star;
            atom_sum = atom_sum + state.mix.atoms[l];
        }
    }

    // mu | ... ~ N2(m_mu, S2_mu)
    const Mat2 b_mu_inv = priors.b_mu.inverse();
    const Mat2 sigma_inv = state.sigma.inverse();
    const Mat2 prec = b_mu_inv + sigma_inv * static_cast<double>(n_star);
    const Mat2 s2_mu = prec.inverse();
    if (!s2_mu.is_spd()) throw std::runtime_error("update_hypers: singular mu covariance");
    const Vec2 m_mu = s2_mu * (b_mu_inv * priors.a_mu + sigma_inv * atom_sum);
    state.mu = rng.normal2(m_mu, s2_mu);

    // Sigma | ... ~ InvWishart(n* + a_sigma, B_sigma + scatter about mu)
    Mat2 scatter = priors.b_sigma;
    for (std::size_t l = 0; l < L; ++l)
        if (active[l]) scatter = scatter + outer(state.mix.atoms[l] - state.mu,
                                                 state.mix.atoms[l] - state.mu);
    state.sigma = rng.inv_wishart(n_star + priors.a_sigma, scatter);

    // alpha | sticks ~ Gamma(L + a_alpha - 1, b_alpha - sum log(1 - V_s))
    double log_sum = 0.0;
    for (double v : state.sticks) log_sum += std::log1p(-v);
    const double rate = priors.b_alpha - log_sum;
    state.alpha = rng.gamma(static_cast<double>(L) + priors.a_alpha - 1.0, rate);
}

inline void gibbs_sweep(ChainState& state, const Dataset& data, const Hyperparams& priors,
                        double proposal_c, const Mat2& s2, RngStream& rng,
                        MhCounters* counters = nullptr) {
    update_atoms(state, data, proposal_c, s2, rng, counters);
    update_weights(state, rng);
    update_labels(state, data, rng);
    update_hypers(state, priors, rng);
}

// ---------------------------------------------------------------------------
// initialization and the full run
// ---------------------------------------------------------------------------

// Labels by quantile-binning the times into min(L, 10) groups and
// moment-matching a gamma to each bin. Everything else starts at prior means.
inline ChainState init_chain(const Dataset& data, const Hyperparams& priors, int truncation) {
    priors.validate();
    data.validate();
    ChainState state;
    const std::size_t L = static_cast<std::size_t>(truncation);
    state.mu = priors.a_mu;
    state.sigma = priors.b_sigma * (1.0 / (priors.a_sigma - 3.0));
    state.alpha = priors.a_alpha / priors.b_alpha;
    state.mix.atoms.assign(L, priors.a_mu);
    state.sticks.assign(L > 0 ? L - 1 : 0, 1.0 / (1.0 + state.alpha));
    state.mix.weights = stick_break(state.sticks);
    state.labels.assign(data.size(), 0);

    const std::size_t n = data.size();
    if (n == 0) return state;
    const std::size_t n_bins = std::min<std::size_t>(L, std::min<std::size_t>(n, 10));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return data.time[a] < data.time[b]; });

    for (std::size_t b = 0; b < n_bins; ++b) {
        const std::size_t lo = b * n / n_bins;
        const std::size_t hi = (b + 1) * n / n_bins;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            state.labels[order[k]] = static_cast<int>(b);
            sum += data.time[order[k]];
            sum2 += data.time[order[k]] * data.time[order[k]];
        }
        const double cnt = static_cast<double>(hi - lo);
        if (cnt == 0.0) continue;
        const double mean = sum / cnt;
        const double var = cnt > 1.0 ? (sum2 - cnt * mean * mean) / (cnt - 1.0) : 0.0;
        double shape = 1.0, rate = 1.0 / mean;
        if (var > 0.0) {
            shape = mean * mean / var;
            rate = mean / var;
        }
        state.mix.atoms[b] = Vec2{std::log(shape), std::log(rate)};
    }
    return state;
}

// Pilot phase estimates the proposal shape S2 as the average sample
// covariance of the active atoms, then freezes it for the main run.
inline PosteriorDraws run_chain(const Dataset& data, const Hyperparams& priors,
                                const ChainConfig& config) {
    config.validate();
    RngStream rng(config.seed);
    ChainState state = init_chain(data, priors, config.truncation);

    const Mat2 prior_sigma_mean = priors.b_sigma * (1.0 / (priors.a_sigma - 3.0));
    Mat2 s2 = prior_sigma_mean;

    if (config.pilot_iters > 0) {
        Mat2 acc{0.0, 0.0, 0.0, 0.0};
        int n_acc = 0;
        for (int it = 0; it < config.pilot_iters; ++it) {
            gibbs_sweep(state, data, priors, config.proposal_c, s2, rng, nullptr);
            std::vector<bool> active(state.truncation(), false);
            for (int w : state.labels) active[static_cast<std::size_t>(w)] = true;
            Vec2 mean{0.0, 0.0};
            int cnt = 0;
            for (std::size_t l = 0; l < state.truncation(); ++l)
                if (active[l]) { mean = mean + state.mix.atoms[l]; ++cnt; }
            if (cnt < 2) continue;
            mean = mean * (1.0 / cnt);
            Mat2 cov{0.0, 0.0, 0.0, 0.0};
            for (std::size_t l = 0; l < state.truncation(); ++l)
                if (active[l]) cov = cov + outer(state.mix.atoms[l] - mean,
                                                 state.mix.atoms[l] - mean);
            acc = acc + cov * (1.0 / (cnt - 1));
            ++n_acc;
        }
        if (n_acc > 0) {
            s2 = acc * (1.0 / n_acc);
            // keep the frozen proposal usable if the pilot collapsed
            if (!s2.is_spd()) s2 = prior_sigma_mean;
        }
    }

    MhCounters counters;
    for (int it = 0; it < config.burn_in; ++it)
        gibbs_sweep(state, data, priors, config.proposal_c, s2, rng, &counters);

    PosteriorDraws out;
    out.config = config;
    out.proposal_s2 = s2;
    out.draws.reserve(static_cast<std::size_t>(config.n_save));
    for (int k = 0; k < config.n_save; ++k) {
        for (int s = 0; s < config.thin; ++s)
            gibbs_sweep(state, data, priors, config.proposal_c, s2, rng, &counters);
        out.draws.push_back(SavedDraw{state.alpha, state.mu, state.sigma, state.mix.weights,
                                      state.mix.atoms, state.labels});
    }
    out.atom_accept_rate = counters.rate();
    return out;
}

}  // namespace mrl

#endif
