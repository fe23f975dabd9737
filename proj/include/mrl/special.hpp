#ifndef MRL_SPECIAL_HPP
#define MRL_SPECIAL_HPP

// Special functions used throughout: regularized incomplete gamma (both
// tails, plus log-space variants for censored likelihood tails), the
// exponential integral E1, the standard normal CDF, and the regularized
// incomplete beta function.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mrl {

inline double log_gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("log_gamma_fn: x must be > 0");
    return std::lgamma(x);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// log of the standard normal survival 1 - Phi(x); asymptotic branch keeps the
// deep tail finite where erfc underflows (around x = 37).
inline double log_normal_sf(double x) {
    if (x < 26.0) {
        const double s = 0.5 * std::erfc(x * M_SQRT1_2);
        return std::log(s);
    }
    const double x2 = x * x;
    double corr = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(x) + std::log(corr);
}

namespace detail {

inline constexpr double kRelTol = 1e-14;

inline int max_iters(double a) {
    return 600 + static_cast<int>(30.0 * std::sqrt(std::max(a, 1.0)));
}

// log of the series part of P(a,x): P = exp(a*log(x) - x - lgamma(a)) * sum
inline double gamma_p_series_log(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    const int itmax = max_iters(a);
    for (int n = 0; n < itmax; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kRelTol)
            return a * std::log(x) - x - std::lgamma(a) + std::log(sum);
    }
    throw std::runtime_error("gamma_p: series failed to converge");
}

// log of the continued-fraction part of Q(a,x) (modified Lentz)
inline double gamma_q_cf_log(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    const int itmax = max_iters(a);
    for (int i = 1; i <= itmax; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kRelTol)
            return a * std::log(x) - x - std::lgamma(a) + std::log(h);
    }
    throw std::runtime_error("gamma_q: continued fraction failed to converge");
}

// Wilson-Hilferty cube-root normal approximation, used for huge shapes where
// series/continued-fraction iteration counts blow up. Sampler atoms drawn
// from deep prior tails land here; ~1e-5 relative accuracy is ample there.
inline constexpr double kHugeShape = 1e6;

inline double wilson_hilferty_z(double a, double x) {
    return (std::cbrt(x / a) + 1.0 / (9.0 * a) - 1.0) * 3.0 * std::sqrt(a);
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x); monotone in x, values in [0,1].
// Series for x < a+1, continued fraction otherwise.
inline double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_p: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (a > detail::kHugeShape)
        return 0.5 * std::erfc(-detail::wilson_hilferty_z(a, x) * M_SQRT1_2);
    if (x < a + 1.0) return std::exp(detail::gamma_p_series_log(a, x));
    return 1.0 - std::exp(detail::gamma_q_cf_log(a, x));
}

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x) (gamma survival).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_q: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (a > detail::kHugeShape)
        return 0.5 * std::erfc(detail::wilson_hilferty_z(a, x) * M_SQRT1_2);
    if (x < a + 1.0) return 1.0 - std::exp(detail::gamma_p_series_log(a, x));
    return std::exp(detail::gamma_q_cf_log(a, x));
}

// log Q(a, x), finite far into the tail where Q underflows.
inline double log_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("log_gamma_q: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("log_gamma_q: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (a > detail::kHugeShape) return log_normal_sf(detail::wilson_hilferty_z(a, x));
    if (x >= a + 1.0) return detail::gamma_q_cf_log(a, x);
    const double p = std::exp(detail::gamma_p_series_log(a, x));
    if (p < 1.0) return std::log1p(-p);
    return -std::numeric_limits<double>::infinity();
}

inline double log_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("log_gamma_p: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("log_gamma_p: x must be >= 0");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (a > detail::kHugeShape) return log_normal_sf(-detail::wilson_hilferty_z(a, x));
    if (x < a + 1.0) return detail::gamma_p_series_log(a, x);
    const double q = std::exp(detail::gamma_q_cf_log(a, x));
    if (q < 1.0) return std::log1p(-q);
    return -std::numeric_limits<double>::infinity();
}

// e^z * E1(z): the scaled exponential integral, stable for large z.
inline double expint_e1_scaled(double z) {
    if (!(z > 0.0)) throw std::invalid_argument("expint_e1_scaled: z must be > 0");
    if (z <= 1.0) {
        // series:  E1(z) = -gamma - log z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
        const double euler = 0.57721566490153286060651209008240243;
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -z / k;
            const double add = -term / k;
            sum += add;
            if (std::fabs(add) < std::fabs(sum) * 1e-16) break;
        }
        return std::exp(z) * (-euler - std::log(z) + sum);
    }
    // continued fraction (Lentz):  E1(z) = e^{-z} / (z + 1/(1 + 1/(z + 2/(1 + ...))))
    const double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) return h;
    }
    throw std::runtime_error("expint_e1_scaled: continued fraction failed to converge");
}

// E1(z) = Gamma_inc(0, z) = int_z^inf u^{-1} e^{-u} du
inline double expint_e1(double z) { return std::exp(-z) * expint_e1_scaled(z); }

namespace detail {

inline double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    const int itmax = 800;
    for (int m = 1; m <= itmax; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kRelTol) return h;
    }
    throw std::runtime_error("inc_beta: continued fraction failed to converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("inc_beta: parameters must be > 0");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("inc_beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::betacf(a, b, x) / a;
    return 1.0 - bt * detail::betacf(b, a, 1.0 - x) / b;
}

// log(1 - e^{-x}) for x > 0, full precision on both ends
inline double log1mexp(double x) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return x > 0.6931471805599453 ? std::log1p(-std::exp(-x)) : std::log(-std::expm1(-x));
}

// log-sum-exp over a range of log values
template <typename It>
double log_sum_exp(It first, It last) {
    double mx = -std::numeric_limits<double>::infinity();
    for (It it = first; it != last; ++it)
        if (*it > mx) mx = *it;
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (It it = first; it != last; ++it) s += std::exp(*it - mx);
    return mx + std::log(s);
}

}  // namespace mrl

#endif
