#ifndef MRL_TESTS_ORACLES_HPP
#define MRL_TESTS_ORACLES_HPP

// Test-side oracles, kept independent of the library's quadrature: adaptive
// Boole's rule with interval halving, a tail integrator over tripling
// segments, and brute-force mrl evaluation straight from the definition
// m(t) = int_t^inf S / S(t).

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mrl/distributions.hpp"
#include "mrl/mixture.hpp"

namespace oracle {

inline double boole(const std::function<double(double)>& f, double a, double b) {
    const double h = (b - a) / 4.0;
    return (b - a) / 90.0 *
           (7.0 * f(a) + 32.0 * f(a + h) + 12.0 * f(a + 2.0 * h) + 32.0 * f(a + 3.0 * h) +
            7.0 * f(b));
}

inline double integrate_rec(const std::function<double(double)>& f, double a, double b,
                            double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double left = boole(f, a, m);
    const double right = boole(f, m, b);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 63.0 * eps)
        return left + right + diff / 63.0;
    return integrate_rec(f, a, m, left, 0.5 * eps, depth - 1) +
           integrate_rec(f, m, b, right, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-11) {
    if (!(b > a)) return 0.0;
    return integrate_rec(f, a, b, boole(f, a, b), eps, 48);
}

inline double integrate_tail(const std::function<double(double)>& f, double a,
                             double rel_eps = 1e-11, int max_segments = 600) {
    const double step0 = std::max(a, 1.0) * 0.5;
    double lo = a;
    double hi = a + step0;
    double total = 0.0;
    for (int k = 0; k < max_segments; ++k) {
        // keep the tolerance relative to the integral's own magnitude, so
        // tiny tails (e.g. E1 far out) are still resolved to full precision
        const double scale =
            std::max({std::fabs(total), std::fabs(boole(f, lo, hi)), 1e-300});
        const double seg = integrate(f, lo, hi, rel_eps * scale);
        total += seg;
        if (k > 1 && std::fabs(seg) <= rel_eps * std::max(std::fabs(total), 1e-300))
            return total;
        lo = hi;
        hi = a + (hi - a) * 3.0;
        if (!std::isfinite(hi)) break;
    }
    throw std::runtime_error("oracle::integrate_tail: did not settle");
}

// m(t) = int_t^inf S(u) du / S(t), straight from the survival function
inline double mrl_from_survival(const std::function<double(double)>& survival, double t) {
    const double s_t = t > 0.0 ? survival(t) : 1.0;
    if (!(s_t > 0.0)) return 0.0;
    return integrate_tail(survival, t) / s_t;
}

inline double parametric_mrl(const mrl::DistSpec& dist, double t) {
    auto surv = [&](double u) { return u > 0.0 ? mrl::eval_core(dist, u).survival : 1.0; };
    return mrl_from_survival(surv, t);
}

inline double mixture_mrl(const mrl::MixtureParams& params, double t) {
    auto surv = [&](double u) { return u > 0.0 ? mrl::mixture_survival_at(params, u) : 1.0; };
    return mrl_from_survival(surv, t);
}

// Algebraic route for the gamma mixture:
//   int_t^inf Q(a, b u) du = (a/b) Q(a+1, b t) - t Q(a, b t)
inline double mixture_mrl_closed_form(const mrl::MixtureParams& params, double t) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < params.size(); ++l) {
        const double a = std::exp(params.atoms[l].x);
        const double b = std::exp(params.atoms[l].y);
        const double q = mrl::gamma_q(a, b * t);
        num += params.weights[l] * ((a / b) * mrl::gamma_q(a + 1.0, b * t) - t * q);
        den += params.weights[l] * q;
    }
    return den > 0.0 ? num / den : 0.0;
}

// ---------------------------------------------------------------------------
// numeric mrl shape detector: sign pattern of finite differences
// ---------------------------------------------------------------------------

inline mrl::ShapeLabel detect_shape(const std::function<double(double)>& m,
                                    const std::vector<double>& probe_points) {
    const double m0 = m(probe_points.front());
    const double tol = 1e-10 * std::fabs(m0);
    bool seen_up = false, seen_down = false;
    int first_move = 0;  // +1 up first, -1 down first
    double prev = m0;
    for (std::size_t i = 1; i < probe_points.size(); ++i) {
        const double cur = m(probe_points[i]);
        const double d = cur - prev;
        if (d > tol) {
            if (!seen_up && !seen_down) first_move = +1;
            seen_up = true;
        } else if (d < -tol) {
            if (!seen_up && !seen_down) first_move = -1;
            seen_down = true;
        }
        prev = cur;
    }
    if (!seen_up && !seen_down) return mrl::ShapeLabel::CONSTANT;
    if (seen_up && !seen_down) return mrl::ShapeLabel::INC;
    if (seen_down && !seen_up) return mrl::ShapeLabel::DCR;
    return first_move < 0 ? mrl::ShapeLabel::BT : mrl::ShapeLabel::UBT;
}

}  // namespace oracle

#endif
