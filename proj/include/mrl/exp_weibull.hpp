#ifndef MRL_EXP_WEIBULL_HPP
#define MRL_EXP_WEIBULL_HPP

// Exponentiated Weibull competitor model: F(t) = [1 - exp(-(t/sigma)^alpha)]^theta.
// Random-walk Metropolis-Hastings on the log scale with exponential priors,
// inverse-CDF sampling, and the quantile system used to set prior means.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrl/distributions.hpp"
#include "mrl/gibbs.hpp"
#include "mrl/grid.hpp"
#include "mrl/quad.hpp"
#include "mrl/rng.hpp"

namespace mrl {

struct EwState {
    double alpha = 1.0;
    double theta = 1.0;
    double sigma = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !(theta > 0.0) || !(sigma > 0.0))
            throw std::invalid_argument("EwState: parameters must be > 0");
    }
};

inline double ew_cdf(const EwState& s, double t) {
    return detail::ew_cdf_impl(ExpWeibullDist(s.alpha, s.theta, s.sigma), t);
}

inline double ew_survival(const EwState& s, double t) {
    return detail::ew_survival_impl(ExpWeibullDist(s.alpha, s.theta, s.sigma), t);
}

inline double ew_log_pdf(const EwState& s, double t) {
    const double x = std::pow(t / s.sigma, s.alpha);
    return std::log(s.theta) + (s.theta - 1.0) * log1mexp(x) - x +
           std::log(s.alpha / s.sigma) + (s.alpha - 1.0) * std::log(t / s.sigma);
}

inline double ew_log_survival(const EwState& s, double t) {
    const double x = std::pow(t / s.sigma, s.alpha);
    const double v = s.theta * log1mexp(x);  // log F < 0
    return log1mexp(-v);
}

// t = sigma * (-log(1 - p^{1/theta}))^{1/alpha}
inline double ew_quantile(const EwState& s, double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("ew_quantile: p must be in (0,1)");
    const double root = std::pow(p, 1.0 / s.theta);
    return s.sigma * std::pow(-std::log1p(-root), 1.0 / s.alpha);
}

inline double ew_sample(const EwState& s, RngStream& rng) { return ew_quantile(s, rng.uniform()); }

// mrl over a grid in one backward sweep: tail integral past the last point,
// then per-segment quadrature of the survival
inline std::vector<double> ew_mrl_curve(const EwState& s, const Grid& grid,
                                        double survival_floor = 1e-10) {
    auto surv = [&](double u) { return u > 0.0 ? ew_survival(s, u) : 1.0; };
    const std::size_t m = grid.size();
    std::vector<double> tail(m);
    tail[m - 1] = integrate_to_infinity(surv, grid.back(), 1e-9);
    for (std::size_t j = m - 1; j-- > 0;)
        tail[j] = tail[j + 1] + adaptive_simpson(surv, grid[j], grid[j + 1], 1e-11);
    std::vector<double> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double sj = surv(grid[j]);
        out[j] = sj >= survival_floor ? tail[j] / sj
                                      : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

struct EwPriorMeans {
    double a_alpha = 1.0;
    double a_theta = 1.0;
    double a_sigma = 1.0;

    void validate() const {
        if (!(a_alpha > 0.0) || !(a_theta > 0.0) || !(a_sigma > 0.0))
            throw std::invalid_argument("EwPriorMeans: prior means must be > 0");
    }
};

struct EwConfig {
    int burn_in = 5000;
    int thin = 5;
    int n_save = 2000;
    double proposal_sd = 0.1;  // common sd of the trivariate normal step on logs
    std::uint64_t seed = 42;

    void validate() const {
        if (burn_in < 0 || thin < 1 || n_save < 1)
            throw std::invalid_argument("EwConfig: invalid sampler settings");
        if (proposal_sd < 0.0)
            throw std::invalid_argument("EwConfig: proposal_sd must be >= 0");
    }
};

struct EwDraws {
    std::vector<EwState> draws;
    double accept_rate = 0.0;
    bool degenerate_proposal = false;  // proposal_sd == 0: the chain cannot move
    EwConfig config;
};

namespace detail {

inline double ew_log_target(const std::array<double, 3>& u, const Dataset& data,
                            const EwPriorMeans& prior) {
    const EwState s{std::exp(u[0]), std::exp(u[1]), std::exp(u[2])};
    double lp = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        lp += data.censored[i] ? ew_log_survival(s, data.time[i]) : ew_log_pdf(s, data.time[i]);
        if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
    }
    // exponential priors with the elicited means, plus the log-scale Jacobian
    lp += -s.alpha / prior.a_alpha - s.theta / prior.a_theta - s.sigma / prior.a_sigma;
    lp += u[0] + u[1] + u[2];
    return lp;
}

}  // namespace detail

inline EwDraws fit_exp_weibull(const Dataset& data, const EwPriorMeans& prior,
                               const EwConfig& config) {
    data.validate();
    prior.validate();
    config.validate();
    RngStream rng(config.seed);

    std::array<double, 3> u{std::log(prior.a_alpha), std::log(prior.a_theta),
                            std::log(prior.a_sigma)};
    double lp = detail::ew_log_target(u, data, prior);
    long proposed = 0, accepted = 0;

    EwDraws out;
    out.config = config;
    out.degenerate_proposal = config.proposal_sd == 0.0;
    out.draws.reserve(static_cast<std::size_t>(config.n_save));

    const long total = static_cast<long>(config.burn_in) +
                       static_cast<long>(config.thin) * config.n_save;
    for (long it = 0; it < total; ++it) {
        std::array<double, 3> cand{u[0] + config.proposal_sd * rng.normal(),
                                   u[1] + config.proposal_sd * rng.normal(),
                                   u[2] + config.proposal_sd * rng.normal()};
        const double lp_cand = detail::ew_log_target(cand, data, prior);
        ++proposed;
        if (std::log(rng.uniform()) < lp_cand - lp) {
            u = cand;
            lp = lp_cand;
            ++accepted;
        }
        const long k = it - config.burn_in + 1;
        if (k > 0 && k % config.thin == 0)
            out.draws.push_back(EwState{std::exp(u[0]), std::exp(u[1]), std::exp(u[2])});
    }
    out.accept_rate = proposed > 0 ? double(accepted) / double(proposed) : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// prior means from three data quantiles: solve P_j = [1 - e^{-(Q_j/sigma)^alpha}]^theta
// ---------------------------------------------------------------------------

namespace detail {

// With y_j(alpha, sigma) = log(1 - e^{-(Q_j/sigma)^alpha}), a common theta
// forces y_1/log P_1 = y_2/log P_2 = y_3/log P_3; two residuals in
// (log alpha, log sigma) remain.
inline std::array<double, 2> ew_quantile_residual(const std::array<double, 2>& x,
                                                  const std::array<double, 3>& logp,
                                                  const std::array<double, 3>& q) {
    const double alpha = std::exp(x[0]);
    const double sigma = std::exp(x[1]);
    std::array<double, 3> y;
    for (int j = 0; j < 3; ++j) y[j] = log1mexp(std::pow(q[j] / sigma, alpha));
    return {y[0] * logp[1] - y[1] * logp[0], y[0] * logp[2] - y[2] * logp[0]};
}

// least-squares objective over theta: theta* = sum y log P / sum y^2
inline double ew_quantile_lsq(const std::array<double, 2>& x,
                              const std::array<double, 3>& logp,
                              const std::array<double, 3>& q, double* theta_out) {
    const double alpha = std::exp(x[0]);
    const double sigma = std::exp(x[1]);
    double yy = 0.0, yp = 0.0;
    std::array<double, 3> y;
    for (int j = 0; j < 3; ++j) {
        y[j] = log1mexp(std::pow(q[j] / sigma, alpha));
        if (!std::isfinite(y[j])) return std::numeric_limits<double>::infinity();
        yy += y[j] * y[j];
        yp += y[j] * logp[j];
    }
    const double theta = yp / yy;
    if (!(theta > 0.0)) return std::numeric_limits<double>::infinity();
    if (theta_out) *theta_out = theta;
    double sse = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double r = theta * y[j] - logp[j];
        sse += r * r;
    }
    return sse;
}

}  // namespace detail

struct EwQuantileSolution {
    EwPriorMeans means;
    double residual = 0.0;  // max relative quantile mismatch at the solution
    bool exact = true;      // false when only a least-squares fit exists
};

// Solves P_j = F(Q_j) for (alpha, theta, sigma). Some quantile triples lie
// outside the family's range; with allow_approximate the best least-squares
// fit is returned instead of an error (prior means only need to be close).
inline EwQuantileSolution ew_prior_from_quantiles(const std::array<double, 3>& p,
                                                  const std::array<double, 3>& q,
                                                  bool allow_approximate = false) {
    for (int j = 0; j < 3; ++j) {
        if (!(p[j] > 0.0) || !(p[j] < 1.0))
            throw std::invalid_argument("ew_prior_from_quantiles: probabilities in (0,1)");
        if (!(q[j] > 0.0)) throw std::invalid_argument("ew_prior_from_quantiles: quantiles > 0");
        if (j > 0 && (!(p[j] > p[j - 1]) || !(q[j] > q[j - 1])))
            throw std::invalid_argument("ew_prior_from_quantiles: P and Q must be increasing");
    }
    const std::array<double, 3> logp{std::log(p[0]), std::log(p[1]), std::log(p[2])};

    // Weibull-only start (theta = 1) from the outer quantiles
    const double la0 = (std::log(-std::log1p(-p[2])) - std::log(-std::log1p(-p[0]))) /
                       (std::log(q[2]) - std::log(q[0]));
    const double alpha0 = la0 > 0.0 ? la0 : 1.0;
    const double sigma0 = q[1] / std::pow(-std::log1p(-p[1]), 1.0 / alpha0);

    double best_norm = std::numeric_limits<double>::infinity();
    std::array<double, 2> best_x{std::log(alpha0), std::log(sigma0)};

    const double mults[] = {1.0, 0.5, 2.0, 0.25, 4.0, 0.1, 10.0};
    int starts = 0;
    for (double ma : mults) {
        for (double ms : mults) {
            if (++starts > 50) break;
            std::array<double, 2> x{std::log(alpha0 * ma), std::log(sigma0 * ms)};
            // damped Newton with a numerical Jacobian
            for (int iter = 0; iter < 200; ++iter) {
                const auto r = detail::ew_quantile_residual(x, logp, q);
                const double norm = std::fabs(r[0]) + std::fabs(r[1]);
                if (norm < best_norm) {
                    best_norm = norm;
                    best_x = x;
                }
                if (norm < 1e-13) break;
                const double h = 1e-7;
                const auto r_a = detail::ew_quantile_residual({x[0] + h, x[1]}, logp, q);
                const auto r_s = detail::ew_quantile_residual({x[0], x[1] + h}, logp, q);
                const double j00 = (r_a[0] - r[0]) / h, j01 = (r_s[0] - r[0]) / h;
                const double j10 = (r_a[1] - r[1]) / h, j11 = (r_s[1] - r[1]) / h;
                const double det = j00 * j11 - j01 * j10;
                if (det == 0.0 || !std::isfinite(det)) break;
                const double dx0 = (r[0] * j11 - r[1] * j01) / det;
                const double dx1 = (r[1] * j00 - r[0] * j10) / det;
                double damp = 1.0;
                for (int back = 0; back < 30; ++back) {
                    const std::array<double, 2> trial{x[0] - damp * dx0, x[1] - damp * dx1};
                    const auto rt = detail::ew_quantile_residual(trial, logp, q);
                    if (std::isfinite(rt[0]) && std::isfinite(rt[1]) &&
                        std::fabs(rt[0]) + std::fabs(rt[1]) < norm) {
                        x = trial;
                        break;
                    }
                    damp *= 0.5;
                    if (back == 29) iter = 200;  // stuck
                }
            }
            if (best_norm < 1e-13) break;
        }
        if (best_norm < 1e-13) break;
    }

    double alpha = std::exp(best_x[0]);
    double sigma = std::exp(best_x[1]);
    double theta = logp[0] / log1mexp(std::pow(q[0] / sigma, alpha));

    auto worst_of = [&](double a, double th, double s) {
        if (!(a > 0.0) || !(th > 0.0) || !(s > 0.0))
            return std::numeric_limits<double>::infinity();
        const EwState state{a, th, s};
        double worst = 0.0;
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst, std::fabs(ew_quantile(state, p[j]) - q[j]) / q[j]);
        return worst;
    };
    double worst = worst_of(alpha, theta, sigma);

    if (!(worst <= 1e-6)) {
        // no exact root: minimize the squared residual over (log a, log s)
        // with theta profiled out, coarse grid then pattern search
        std::array<double, 2> x{0.0, std::log(q[1])};
        double fx = std::numeric_limits<double>::infinity();
        for (double la = -2.5; la <= 3.0; la += 0.25) {
            for (double ls = std::log(q[0]) - 2.0; ls <= std::log(q[2]) + 2.0; ls += 0.25) {
                const double f = detail::ew_quantile_lsq({la, ls}, logp, q, nullptr);
                if (f < fx) {
                    fx = f;
                    x = {la, ls};
                }
            }
        }
        // stay inside the search box: out-of-range triples otherwise drive
        // the fit to a degenerate corner (alpha huge, theta tiny)
        const double la_lo = -2.5, la_hi = 3.0;
        const double ls_lo = std::log(q[0]) - 2.0, ls_hi = std::log(q[2]) + 2.0;
        double step = 0.125;
        for (int it = 0; it < 400 && step > 1e-10; ++it) {
            bool moved = false;
            for (const auto& d : {std::array<double, 2>{step, 0.0},
                                  std::array<double, 2>{-step, 0.0},
                                  std::array<double, 2>{0.0, step},
                                  std::array<double, 2>{0.0, -step}}) {
                const std::array<double, 2> trial{x[0] + d[0], x[1] + d[1]};
                if (trial[0] < la_lo || trial[0] > la_hi || trial[1] < ls_lo ||
                    trial[1] > ls_hi)
                    continue;
                const double f = detail::ew_quantile_lsq(trial, logp, q, nullptr);
                if (f < fx) {
                    fx = f;
                    x = trial;
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
        double th = 0.0;
        if (std::isfinite(detail::ew_quantile_lsq(x, logp, q, &th))) {
            const double a2 = std::exp(x[0]);
            const double s2 = std::exp(x[1]);
            if (worst_of(a2, th, s2) < worst) {
                alpha = a2;
                theta = th;
                sigma = s2;
                worst = worst_of(alpha, theta, sigma);
            }
        }
        if (!allow_approximate)
            throw std::runtime_error(
                "ew_prior_from_quantiles: no solution found; best relative quantile residual " +
                std::to_string(worst));
    }

    EwQuantileSolution sol;
    sol.means = EwPriorMeans{alpha, theta, sigma};
    sol.residual = worst;
    sol.exact = worst <= 1e-6;
    if (!std::isfinite(worst) || !(theta > 0.0))
        throw std::runtime_error("ew_prior_from_quantiles: quantile system defeated the solver");
    return sol;
}

}  // namespace mrl

#endif
