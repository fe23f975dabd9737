#ifndef MRL_DISTRIBUTIONS_HPP
#define MRL_DISTRIBUTIONS_HPP

// Parametric survival catalog: density / survival / hazard, closed-form mean
// residual life where one exists, the inversion formula S from m, survival
// moments, and shape classification of the mrl function.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include "mrl/quad.hpp"
#include "mrl/special.hpp"

namespace mrl {

enum class ShapeLabel { INC, DCR, CONSTANT, BT, UBT, UNDEFINED };

inline const char* to_string(ShapeLabel s) {
    switch (s) {
        case ShapeLabel::INC: return "INC";
        case ShapeLabel::DCR: return "DCR";
        case ShapeLabel::CONSTANT: return "CONSTANT";
        case ShapeLabel::BT: return "BT";
        case ShapeLabel::UBT: return "UBT";
        case ShapeLabel::UNDEFINED: return "UNDEFINED";
    }
    return "?";
}

struct GammaDist {
    double shape, rate;
    GammaDist(double g, double b) : shape(g), rate(b) {
        if (!(g > 0.0) || !(b > 0.0))
            throw std::invalid_argument("GammaDist: shape and rate must be > 0");
    }
};

struct WeibullDist {
    double shape, scale;
    WeibullDist(double g, double l) : shape(g), scale(l) {
        if (!(g > 0.0) || !(l > 0.0))
            throw std::invalid_argument("WeibullDist: shape and scale must be > 0");
    }
};

struct LognormalDist {
    double mu, sigma;  // location and scale sd (variance sigma^2 on log scale)
    LognormalDist(double m, double s) : mu(m), sigma(s) {
        if (!(s > 0.0) || !std::isfinite(m))
            throw std::invalid_argument("LognormalDist: need finite mu and sigma > 0");
    }
};

struct LoglogisticDist {
    double shape, scale;  // mrl defined only for shape > 1
    LoglogisticDist(double g, double l) : shape(g), scale(l) {
        if (!(g > 0.0) || !(l > 0.0))
            throw std::invalid_argument("LoglogisticDist: shape and scale must be > 0");
    }
};

struct GompertzDist {
    // density lambda*gamma*e^{lambda t} exp(gamma (1 - e^{lambda t})),
    // hazard gamma*lambda*e^{lambda t}
    double shape, scale;
    GompertzDist(double g, double l) : shape(g), scale(l) {
        if (!(g > 0.0) || !(l > 0.0))
            throw std::invalid_argument("GompertzDist: shape and scale must be > 0");
    }
};

struct ExpWeibullDist {
    double alpha, theta, sigma;  // F = [1 - exp(-(t/sigma)^alpha)]^theta
    ExpWeibullDist(double a, double t, double s) : alpha(a), theta(t), sigma(s) {
        if (!(a > 0.0) || !(t > 0.0) || !(s > 0.0))
            throw std::invalid_argument("ExpWeibullDist: parameters must be > 0");
    }
};

struct LinearMrlDist {
    double slope, intercept;  // m(t) = slope*t + intercept, slope > -1, intercept > 0
    LinearMrlDist(double a, double b) : slope(a), intercept(b) {
        if (!(a > -1.0) || !(b > 0.0))
            throw std::invalid_argument("LinearMrlDist: need slope > -1 and intercept > 0");
    }
};

using DistSpec = std::variant<GammaDist, WeibullDist, LognormalDist, LoglogisticDist,
                              GompertzDist, ExpWeibullDist, LinearMrlDist>;

struct CoreEval {
    double density = 0.0;
    double survival = 0.0;
    double hazard = 0.0;
    bool survival_underflow = false;  // hazard reported as +inf when set
};

// ---------------------------------------------------------------------------
// density / survival / hazard
// ---------------------------------------------------------------------------

namespace detail {

inline CoreEval make_core(double density, double survival) {
    CoreEval e;
    e.density = density;
    e.survival = survival;
    if (survival > 0.0) {
        e.hazard = density / survival;
    } else {
        e.survival_underflow = true;
        e.hazard = std::numeric_limits<double>::infinity();
    }
    return e;
}

inline double ew_x(const ExpWeibullDist& d, double t) { return std::pow(t / d.sigma, d.alpha); }

inline double ew_cdf_impl(const ExpWeibullDist& d, double t) {
    if (t <= 0.0) return 0.0;
    const double x = ew_x(d, t);
    return std::exp(d.theta * log1mexp(x));
}

inline double ew_survival_impl(const ExpWeibullDist& d, double t) {
    if (t <= 0.0) return 1.0;
    const double x = ew_x(d, t);
    return -std::expm1(d.theta * log1mexp(x));
}

inline double ew_pdf_impl(const ExpWeibullDist& d, double t) {
    const double x = ew_x(d, t);
    const double lp = std::log(d.theta) + (d.theta - 1.0) * log1mexp(x) - x +
                      std::log(d.alpha / d.sigma) + (d.alpha - 1.0) * std::log(t / d.sigma);
    return std::exp(lp);
}

}  // namespace detail

inline CoreEval eval_core(const DistSpec& dist, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("eval_core: t must be > 0");
    struct Visitor {
        double t;
        CoreEval operator()(const GammaDist& d) const {
            const double lp = d.shape * std::log(d.rate) + (d.shape - 1.0) * std::log(t) -
                              d.rate * t - std::lgamma(d.shape);
            return detail::make_core(std::exp(lp), gamma_q(d.shape, d.rate * t));
        }
        CoreEval operator()(const WeibullDist& d) const {
            const double z = std::pow(t / d.scale, d.shape);
            const double lp = std::log(d.shape / d.scale) +
                              (d.shape - 1.0) * std::log(t / d.scale) - z;
            return detail::make_core(std::exp(lp), std::exp(-z));
        }
        CoreEval operator()(const LognormalDist& d) const {
            const double w = (std::log(t) - d.mu) / d.sigma;
            const double pdf = std::exp(-0.5 * w * w) / (t * d.sigma * std::sqrt(2.0 * M_PI));
            return detail::make_core(pdf, normal_cdf(-w));
        }
        CoreEval operator()(const LoglogisticDist& d) const {
            const double w = std::pow(t / d.scale, d.shape);
            const double s = 1.0 / (1.0 + w);
            const double pdf = (d.shape / d.scale) * std::pow(t / d.scale, d.shape - 1.0) * s * s;
            return detail::make_core(pdf, s);
        }
        CoreEval operator()(const GompertzDist& d) const {
            const double e = std::exp(d.scale * t);
            const double s = std::exp(d.shape * (1.0 - e));
            return detail::make_core(d.shape * d.scale * e * s, s);
        }
        CoreEval operator()(const ExpWeibullDist& d) const {
            return detail::make_core(detail::ew_pdf_impl(d, t), detail::ew_survival_impl(d, t));
        }
        CoreEval operator()(const LinearMrlDist& d) const {
            if (d.slope == 0.0) {
                const double s = std::exp(-t / d.intercept);
                return detail::make_core(s / d.intercept, s);
            }
            const double base = d.slope * t + d.intercept;
            if (base <= 0.0) return detail::make_core(0.0, 0.0);  // beyond support (slope < 0)
            const double c = 1.0 / d.slope + 1.0;
            const double s = std::pow(d.intercept / base, c);
            const double pdf = (1.0 + d.slope) * std::pow(d.intercept, c) * std::pow(base, -c - 1.0);
            return detail::make_core(pdf, s);
        }
    };
    return std::visit(Visitor{t}, dist);
}

// ---------------------------------------------------------------------------
// mean and mean residual life
// ---------------------------------------------------------------------------

inline double parametric_mean(const DistSpec& dist) {
    struct Visitor {
        double operator()(const GammaDist& d) const { return d.shape / d.rate; }
        double operator()(const WeibullDist& d) const {
            return d.scale * std::exp(std::lgamma(1.0 + 1.0 / d.shape));
        }
        double operator()(const LognormalDist& d) const {
            return std::exp(d.mu + 0.5 * d.sigma * d.sigma);
        }
        double operator()(const LoglogisticDist& d) const {
            if (!(d.shape > 1.0))
                throw std::domain_error("loglogistic: mean undefined for shape <= 1");
            return d.scale * std::exp(std::lgamma(1.0 + 1.0 / d.shape) +
                                      std::lgamma(1.0 - 1.0 / d.shape));
        }
        double operator()(const GompertzDist& d) const {
            return expint_e1_scaled(d.shape) / d.scale;
        }
        double operator()(const ExpWeibullDist& d) const {
            auto s = [&](double u) { return detail::ew_survival_impl(d, u); };
            return integrate_to_infinity(s, 0.0, 1e-10);
        }
        double operator()(const LinearMrlDist& d) const { return d.intercept; }
    };
    return std::visit(Visitor{}, dist);
}

inline double parametric_mrl(const DistSpec& dist, double t) {
    if (t < 0.0) throw std::invalid_argument("parametric_mrl: t must be >= 0");
    if (t == 0.0) return parametric_mean(dist);
    struct Visitor {
        double t;
        double operator()(const GammaDist& d) const {
            // m(t) = t*h(t)/rate + shape/rate - t, evaluated in log space so
            // the tail stays accurate after the survival underflows
            const double x = d.rate * t;
            const double log_pdf = d.shape * std::log(d.rate) + (d.shape - 1.0) * std::log(t) -
                                   x - std::lgamma(d.shape);
            const double log_term = std::log(t) + log_pdf - std::log(d.rate) -
                                    log_gamma_q(d.shape, x);
            return std::exp(log_term) + d.shape / d.rate - t;
        }
        double operator()(const WeibullDist& d) const {
            const double z = std::pow(t / d.scale, d.shape);
            const double inv = 1.0 / d.shape;
            return std::exp(std::log(d.scale * inv) + std::lgamma(inv) +
                            log_gamma_q(inv, z) + z);
        }
        double operator()(const LognormalDist& d) const {
            const double w = (std::log(t) - d.mu) / d.sigma;
            const double log_ratio = log_normal_sf(w - d.sigma) - log_normal_sf(w);
            return std::exp(d.mu + 0.5 * d.sigma * d.sigma + log_ratio) - t;
        }
        double operator()(const LoglogisticDist& d) const {
            if (!(d.shape > 1.0))
                throw std::domain_error("loglogistic: mrl undefined for shape <= 1");
            const double w = std::pow(t / d.scale, d.shape);
            if (w > 1e100) return t / (d.shape - 1.0);  // Pareto-tail asymptote
            const double inv = 1.0 / d.shape;
            const double surv = 1.0 / (1.0 + w);
            const double beta_sf = inc_beta(1.0 - inv, inv, surv);
            return (d.scale * inv) * std::exp(std::lgamma(inv) + std::lgamma(1.0 - inv)) *
                   beta_sf * (1.0 + w);
        }
        double operator()(const GompertzDist& d) const {
            const double log_z = std::log(d.shape) + d.scale * t;
            if (log_z > 690.0)  // e^z E1(z) ~ 1/z
                return std::exp(-std::log(d.scale) - log_z);
            return expint_e1_scaled(std::exp(log_z)) / d.scale;
        }
        double operator()(const ExpWeibullDist& d) const {
            const double s_t = detail::ew_survival_impl(d, t);
            if (s_t <= 0.0) return 0.0;
            auto s = [&](double u) { return detail::ew_survival_impl(d, u); };
            return integrate_to_infinity(s, t, 1e-10) / s_t;
        }
        double operator()(const LinearMrlDist& d) const {
            const double m = d.slope * t + d.intercept;
            return m > 0.0 ? m : 0.0;
        }
    };
    return std::visit(Visitor{t}, dist);
}

// ---------------------------------------------------------------------------
// inversion formula: S(t) = (m(0)/m(t)) exp(-int_0^t 1/m)
// ---------------------------------------------------------------------------

inline double survival_from_mrl(const std::function<double(double)>& m, double t,
                                double eps = 1e-10) {
    if (!(t > 0.0)) throw std::invalid_argument("survival_from_mrl: t must be > 0");
    auto integrand = [&](double u) {
        const double mu = m(u);
        if (!(mu > 0.0))
            throw std::domain_error("survival_from_mrl: mrl must be positive on [0, t]");
        return 1.0 / mu;
    };
    const double m0 = m(0.0);
    const double mt = m(t);
    if (!(m0 > 0.0) || !(mt > 0.0))
        throw std::domain_error("survival_from_mrl: mrl must be positive on [0, t]");
    const double integral = adaptive_simpson(integrand, 0.0, t, eps);
    const double s = (m0 / mt) * std::exp(-integral);
    return s > 1.0 ? 1.0 : s;
}

// ---------------------------------------------------------------------------
// moments from the survival function: E(T^r) = r int t^{r-1} S(t) dt
// ---------------------------------------------------------------------------

inline double moment_from_survival(const std::function<double(double)>& survival,
                                   const std::function<double(double)>& hazard, double r,
                                   double scale_hint = 1.0) {
    if (!(r > 0.0)) throw std::invalid_argument("moment_from_survival: r must be > 0");
    auto integrand = [&](double u) {
        return u > 0.0 ? r * std::pow(u, r - 1.0) * survival(u) : (r == 1.0 ? survival(0.0) : 0.0);
    };
    // march out in doubling segments until the survival is negligible, then
    // close with an exponential-tail correction from the local hazard
    double lo = 0.0;
    double hi = std::max(scale_hint, 1e-6);
    double total = 0.0;
    double prev_seg = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    for (int k = 0; k < 260; ++k) {
        const double seg = adaptive_simpson(integrand, lo, hi,
                                            1e-11 * std::max(std::fabs(total), 1.0));
        total += seg;
        if (survival(hi) < 1e-12) {
            const double h = hazard(hi);
            if (h > 0.0 && std::isfinite(h))
                total += r * std::pow(hi, r - 1.0) * survival(hi) / h;
            return total;
        }
        if (std::fabs(seg) > std::fabs(prev_seg)) {
            if (++growth_streak >= 16)
                throw std::runtime_error("moment_from_survival: integral not settling");
        } else {
            growth_streak = 0;
        }
        prev_seg = seg;
        lo = hi;
        hi *= 2.0;
    }
    throw std::runtime_error("moment_from_survival: integral not settling");
}

inline double moment_from_survival(const DistSpec& dist, double r) {
    auto surv = [&](double u) { return u > 0.0 ? eval_core(dist, u).survival : 1.0; };
    auto haz = [&](double u) { return eval_core(dist, u).hazard; };
    return moment_from_survival(surv, haz, r, parametric_mean(dist));
}

// ---------------------------------------------------------------------------
// mrl shape classification
// ---------------------------------------------------------------------------

inline ShapeLabel classify_mrl_shape(const DistSpec& dist) {
    struct Visitor {
        ShapeLabel operator()(const GammaDist& d) const {
            if (d.shape < 1.0) return ShapeLabel::INC;
            if (d.shape == 1.0) return ShapeLabel::CONSTANT;
            return ShapeLabel::DCR;
        }
        ShapeLabel operator()(const WeibullDist& d) const {
            if (d.shape < 1.0) return ShapeLabel::INC;
            if (d.shape == 1.0) return ShapeLabel::CONSTANT;
            return ShapeLabel::DCR;
        }
        ShapeLabel operator()(const LognormalDist&) const { return ShapeLabel::BT; }
        ShapeLabel operator()(const LoglogisticDist& d) const {
            return d.shape > 1.0 ? ShapeLabel::BT : ShapeLabel::UNDEFINED;
        }
        ShapeLabel operator()(const GompertzDist&) const { return ShapeLabel::DCR; }
        ShapeLabel operator()(const ExpWeibullDist& d) const {
            const double prod = d.alpha * d.theta;
            if (d.alpha == 1.0 && d.theta == 1.0) return ShapeLabel::CONSTANT;
            if (d.theta == 1.0)
                return d.alpha < 1.0 ? ShapeLabel::INC : ShapeLabel::DCR;
            if (d.alpha < 1.0 && prod < 1.0) return ShapeLabel::INC;
            if (d.alpha > 1.0 && prod > 1.0) return ShapeLabel::DCR;
            if (d.alpha > 1.0 && d.theta < 1.0) return ShapeLabel::UBT;  // prod < 1 here
            if (d.alpha < 1.0 && d.theta > 1.0) return ShapeLabel::BT;   // prod > 1 here
            // alpha == 1: exponentiated exponential is monotone in theta
            return prod > 1.0 ? ShapeLabel::DCR : ShapeLabel::INC;
        }
        ShapeLabel operator()(const LinearMrlDist& d) const {
            if (d.slope > 0.0) return ShapeLabel::INC;
            if (d.slope == 0.0) return ShapeLabel::CONSTANT;
            return ShapeLabel::DCR;
        }
    };
    return std::visit(Visitor{}, dist);
}

// ---------------------------------------------------------------------------
// parsing / formatting for the catalog CLI
// ---------------------------------------------------------------------------

inline std::string dist_name(const DistSpec& dist) {
    struct Visitor {
        std::string operator()(const GammaDist&) const { return "gamma"; }
        std::string operator()(const WeibullDist&) const { return "weibull"; }
        std::string operator()(const LognormalDist&) const { return "lognormal"; }
        std::string operator()(const LoglogisticDist&) const { return "loglogistic"; }
        std::string operator()(const GompertzDist&) const { return "gompertz"; }
        std::string operator()(const ExpWeibullDist&) const { return "expweibull"; }
        std::string operator()(const LinearMrlDist&) const { return "linearmrl"; }
    };
    return std::visit(Visitor{}, dist);
}

// "gamma:2,1" / "weibull:1.5,2" / "lognormal:<mu>,<sigma^2>" /
// "loglogistic:2,1" / "gompertz:1,1" / "expweibull:2,5,2" / "linearmrl:0.5,2"
inline DistSpec parse_dist(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("parse_dist: expected <name>:<params>");
    const std::string name = text.substr(0, colon);
    std::vector<double> args;
    std::size_t pos = colon + 1;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const std::string tok =
            text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.empty()) throw std::invalid_argument("parse_dist: empty parameter");
        std::size_t used = 0;
        args.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("parse_dist: bad number: " + tok);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("parse_dist: " + name + " takes " + std::to_string(n) +
                                        " parameters");
    };
    if (name == "gamma") { need(2); return GammaDist(args[0], args[1]); }
    if (name == "weibull") { need(2); return WeibullDist(args[0], args[1]); }
    if (name == "lognormal") {
        need(2);
        if (!(args[1] > 0.0)) throw std::invalid_argument("parse_dist: lognormal needs sigma^2 > 0");
        return LognormalDist(args[0], std::sqrt(args[1]));
    }
    if (name == "loglogistic") { need(2); return LoglogisticDist(args[0], args[1]); }
    if (name == "gompertz") { need(2); return GompertzDist(args[0], args[1]); }
    if (name == "expweibull") { need(3); return ExpWeibullDist(args[0], args[1], args[2]); }
    if (name == "linearmrl") { need(2); return LinearMrlDist(args[0], args[1]); }
    throw std::invalid_argument("parse_dist: unknown distribution: " + name);
}

}  // namespace mrl

#endif
