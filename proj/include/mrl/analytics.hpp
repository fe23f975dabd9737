#ifndef MRL_ANALYTICS_HPP
#define MRL_ANALYTICS_HPP

// Posterior-draw summaries: pointwise quantile bands over a grid, kernel
// parameter correlation, two-group mrl comparison, and the posterior
// predictive loss criterion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mrl/exp_weibull.hpp"
#include "mrl/gibbs.hpp"
#include "mrl/grid.hpp"
#include "mrl/mixture.hpp"

namespace mrl {

// Quantile by linear interpolation of order statistics: h = (n-1)p + 1,
// value = x_(floor h) + (h - floor h)(x_(floor h + 1) - x_(floor h)).
inline double quantile_interpolated(std::vector<double> sorted_values, double p) {
    if (sorted_values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("quantile: p must be in [0,1]");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = (n - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

struct FunctionalGrid {
    Grid grid;
    std::vector<double> median, lower, upper;  // NaN where the point is flagged
    std::vector<int> valid_draws;              // draws entering each point
    double level = 0.95;
};

// values[draw][point]; NaN entries are per-point missing values (e.g. mrl
// beyond the survival floor) and are excluded with a count.
inline FunctionalGrid pointwise_bands(const Grid& grid,
                                      const std::vector<std::vector<double>>& values,
                                      double level) {
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("pointwise_bands: level must be in (0,1)");
    if (values.size() < 2) throw std::invalid_argument("pointwise_bands: need >= 2 draws");
    for (const auto& row : values)
        if (row.size() != grid.size())
            throw std::invalid_argument("pointwise_bands: draw/grid size mismatch");

    FunctionalGrid out;
    out.grid = grid;
    out.level = level;
    const std::size_t m = grid.size();
    out.median.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.lower.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.upper.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.valid_draws.assign(m, 0);

    const double p_lo = 0.5 * (1.0 - level);
    std::vector<double> column;
    column.reserve(values.size());
    for (std::size_t j = 0; j < m; ++j) {
        column.clear();
        for (const auto& row : values)
            if (!std::isnan(row[j])) column.push_back(row[j]);
        out.valid_draws[j] = static_cast<int>(column.size());
        if (column.size() < 2) continue;  // point stays flagged
        std::sort(column.begin(), column.end());
        out.lower[j] = quantile_interpolated(column, p_lo);
        out.median[j] = quantile_interpolated(column, 0.5);
        out.upper[j] = quantile_interpolated(column, 1.0 - p_lo);
    }
    return out;
}

// corr(theta, phi) per draw: Sigma_12 / sqrt(Sigma_11 Sigma_22)
inline std::vector<double> atom_correlation(const PosteriorDraws& draws) {
    std::vector<double> out;
    out.reserve(draws.draws.size());
    for (const SavedDraw& d : draws.draws)
        out.push_back(d.sigma.m01 / std::sqrt(d.sigma.m00 * d.sigma.m11));
    return out;
}

// per-draw functional rows over the grid
struct DrawFunctionals {
    std::vector<std::vector<double>> density, survival, hazard, mrl;
};

inline DrawFunctionals evaluate_draw_functionals(const PosteriorDraws& draws, const Grid& grid,
                                                 double survival_floor = 1e-10) {
    DrawFunctionals out;
    const std::size_t b = draws.draws.size();
    out.density.resize(b);
    out.survival.resize(b);
    out.hazard.resize(b);
    out.mrl.resize(b);
    for (std::size_t k = 0; k < b; ++k) {
        MixtureParams params{draws.draws[k].weights, draws.draws[k].atoms};
        const MixtureFunctionals f = mixture_functionals(params, grid);
        out.density[k] = f.density;
        out.survival[k] = f.survival;
        out.hazard[k] = f.hazard;
        const MrlGrid mg = mixture_mrl_grid(params, grid, survival_floor);
        out.mrl[k] = mg.values;
    }
    return out;
}

inline std::vector<std::vector<double>> mrl_draw_matrix(const PosteriorDraws& draws,
                                                        const Grid& grid,
                                                        double survival_floor = 1e-10) {
    std::vector<std::vector<double>> out(draws.draws.size());
    for (std::size_t k = 0; k < draws.draws.size(); ++k) {
        MixtureParams params{draws.draws[k].weights, draws.draws[k].atoms};
        out[k] = mixture_mrl_grid(params, grid, survival_floor).values;
    }
    return out;
}

// ---------------------------------------------------------------------------
// two-group comparison
// ---------------------------------------------------------------------------

struct MrlDifferenceSamples {
    double t = 0.0;
    std::vector<double> differences;  // paired by draw index
    int flagged = 0;                  // pairs dropped for missing values
};

// m_A(t) - m_B(t) per paired draw; t = 0 uses the analytic mixture means.
inline std::vector<MrlDifferenceSamples> mrl_difference(const PosteriorDraws& draws_a,
                                                        const PosteriorDraws& draws_b,
                                                        const std::vector<double>& t_points,
                                                        double survival_floor = 1e-10) {
    if (draws_a.draws.size() != draws_b.draws.size())
        throw std::invalid_argument("mrl_difference: groups must have equal saved draws");
    std::vector<MrlDifferenceSamples> out;
    out.reserve(t_points.size());
    for (double t : t_points) {
        if (t < 0.0) throw std::invalid_argument("mrl_difference: t must be >= 0");
        MrlDifferenceSamples s;
        s.t = t;
        s.differences.reserve(draws_a.draws.size());
        for (std::size_t k = 0; k < draws_a.draws.size(); ++k) {
            MixtureParams pa{draws_a.draws[k].weights, draws_a.draws[k].atoms};
            MixtureParams pb{draws_b.draws[k].weights, draws_b.draws[k].atoms};
            const double ma =
                t == 0.0 ? mixture_mean(pa) : mixture_mrl_at(pa, t, survival_floor);
            const double mb =
                t == 0.0 ? mixture_mean(pb) : mixture_mrl_at(pb, t, survival_floor);
            if (std::isnan(ma) || std::isnan(mb)) {
                ++s.flagged;
                continue;
            }
            s.differences.push_back(ma - mb);
        }
        out.push_back(std::move(s));
    }
    return out;
}

struct ProbCurve {
    Grid grid;
    std::vector<double> prob;        // fraction of paired draws with m_A > m_B
    std::vector<long> count_greater;
    std::vector<long> pairs;         // pairs with both values present
};

// Pr(m_A(t) > m_B(t)) across paired draw matrices (rows = draws).
inline ProbCurve prob_mrl_greater(const Grid& grid,
                                  const std::vector<std::vector<double>>& mrl_a,
                                  const std::vector<std::vector<double>>& mrl_b) {
    if (mrl_a.size() != mrl_b.size() || mrl_a.empty())
        throw std::invalid_argument("prob_mrl_greater: need equally many draws per group");
    ProbCurve out;
    out.grid = grid;
    const std::size_t m = grid.size();
    out.prob.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.count_greater.assign(m, 0);
    out.pairs.assign(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        long greater = 0, pairs = 0;
        for (std::size_t k = 0; k < mrl_a.size(); ++k) {
            const double a = mrl_a[k][j];
            const double b = mrl_b[k][j];
            if (std::isnan(a) || std::isnan(b)) continue;
            ++pairs;
            if (a > b) ++greater;
        }
        out.count_greater[j] = greater;
        out.pairs[j] = pairs;
        if (pairs > 0) out.prob[j] = static_cast<double>(greater) / static_cast<double>(pairs);
    }
    return out;
}

// Prior simulations of the mixture, for prior probability curves: alpha,
// (mu, Sigma), sticks, and atoms all drawn from their priors.
inline PosteriorDraws sample_prior_draws(const Hyperparams& priors, int truncation, int n_draws,
                                         RngStream& rng) {
    priors.validate();
    PosteriorDraws out;
    out.draws.reserve(static_cast<std::size_t>(n_draws));
    const std::size_t L = static_cast<std::size_t>(truncation);
    for (int k = 0; k < n_draws; ++k) {
        SavedDraw d;
        d.alpha = rng.gamma(priors.a_alpha, priors.b_alpha);
        d.mu = rng.normal2(priors.a_mu, priors.b_mu);
        d.sigma = rng.inv_wishart(priors.a_sigma, priors.b_sigma);
        std::vector<double> sticks(L > 0 ? L - 1 : 0);
        for (double& v : sticks) v = rng.beta(1.0, d.alpha);
        d.weights = stick_break(sticks);
        d.atoms.resize(L);
        for (Vec2& a : d.atoms) a = rng.normal2(d.mu, d.sigma);
        out.draws.push_back(std::move(d));
    }
    return out;
}

// ---------------------------------------------------------------------------
// posterior predictive loss (squared error)
// ---------------------------------------------------------------------------

struct Replicates {
    std::vector<double> mean;
    std::vector<double> variance;
};

// One replicate per observation per saved draw, from the gamma component the
// observation's label points at in that draw; per-observation mean/variance
// accumulated by Welford.
inline Replicates gg_replicates_dpmm(const PosteriorDraws& draws, std::size_t n_obs,
                                     RngStream& rng) {
    if (draws.draws.empty()) throw std::invalid_argument("gg_replicates_dpmm: no draws");
    Replicates out;
    out.mean.assign(n_obs, 0.0);
    out.variance.assign(n_obs, 0.0);
    std::vector<double> m2(n_obs, 0.0);
    long count = 0;
    for (const SavedDraw& d : draws.draws) {
        if (d.labels.size() != n_obs)
            throw std::invalid_argument("gg_replicates_dpmm: label/observation mismatch");
        ++count;
        for (std::size_t i = 0; i < n_obs; ++i) {
            const Vec2& atom = d.atoms[static_cast<std::size_t>(d.labels[i])];
            const double rep = rng.gamma(std::exp(atom.x), std::exp(atom.y));
            const double delta = rep - out.mean[i];
            out.mean[i] += delta / static_cast<double>(count);
            m2[i] += delta * (rep - out.mean[i]);
        }
    }
    for (std::size_t i = 0; i < n_obs; ++i)
        out.variance[i] = count > 1 ? m2[i] / static_cast<double>(count - 1) : 0.0;
    return out;
}

// The replicate law does not depend on the observation under the
// exponentiated Weibull model, so one replicate sequence serves every i.
inline Replicates gg_replicates_ew(const EwDraws& draws, std::size_t n_obs, RngStream& rng) {
    if (draws.draws.empty()) throw std::invalid_argument("gg_replicates_ew: no draws");
    double mean = 0.0, m2 = 0.0;
    long count = 0;
    for (const EwState& s : draws.draws) {
        const double rep = ew_sample(s, rng);
        ++count;
        const double delta = rep - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (rep - mean);
    }
    const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    Replicates out;
    out.mean.assign(n_obs, mean);
    out.variance.assign(n_obs, var);
    return out;
}

struct ComparisonResult {
    double goodness = 0.0;        // G = sum (E_i - t_i)^2
    double penalty = 0.0;         // P = sum V_i
    std::vector<double> k_grid;   // finite k values
    std::vector<double> d_values; // D_k = P + k/(k+1) G
    double d_infinity = 0.0;      // P + G
};

inline ComparisonResult gelfand_ghosh(const Replicates& reps, const std::vector<double>& observed,
                                      const std::vector<double>& k_grid) {
    if (reps.mean.size() != observed.size() || reps.variance.size() != observed.size())
        throw std::invalid_argument("gelfand_ghosh: length mismatch");
    ComparisonResult out;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = reps.mean[i] - observed[i];
        out.goodness += e * e;
        out.penalty += reps.variance[i];
    }
    out.k_grid = k_grid;
    out.d_values.reserve(k_grid.size());
    for (double k : k_grid) {
        if (!(k >= 0.0)) throw std::invalid_argument("gelfand_ghosh: k must be >= 0");
        out.d_values.push_back(out.penalty + k / (k + 1.0) * out.goodness);
    }
    out.d_infinity = out.penalty + out.goodness;
    return out;
}

inline std::vector<double> default_k_grid() { return {1.0, 2.0, 5.0, 10.0, 100.0}; }

}  // namespace mrl

#endif
