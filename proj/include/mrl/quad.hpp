#ifndef MRL_QUAD_HPP
#define MRL_QUAD_HPP

// Quadrature helpers: cumulative trapezoid on a grid (the survival integral
// for grid MRL) and adaptive Simpson for one-off integrals and infinite tails.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mrl/grid.hpp"

namespace mrl {

// Cumulative integral of f over [0, t_j] for each grid point, with the
// leading segment [0, t_1] closed by the caller-supplied f(0).
inline std::vector<double> trapezoid_cumint(const Grid& grid,
                                            const std::vector<double>& f_values,
                                            double f_at_zero) {
    if (f_values.size() != grid.size())
        throw std::invalid_argument("trapezoid_cumint: length mismatch");
    if (!std::isfinite(f_at_zero))
        throw std::invalid_argument("trapezoid_cumint: f(0) must be finite");
    for (double v : f_values)
        if (!std::isfinite(v)) throw std::invalid_argument("trapezoid_cumint: non-finite value");

    std::vector<double> out(grid.size());
    double acc = 0.5 * grid[0] * (f_at_zero + f_values[0]);
    out[0] = acc;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        acc += 0.5 * (grid[j] - grid[j - 1]) * (f_values[j] + f_values[j - 1]);
        out[j] = acc;
    }
    return out;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double eps,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps = 1e-10, int max_depth = 40) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

// int_a^inf f over doubling segments; robust for both exponential and
// power-law tails (contributions must decay geometrically eventually).
// Throws when the segment contributions keep growing (divergent integral).
inline double integrate_to_infinity(const std::function<double(double)>& f, double a,
                                    double rel_eps = 1e-10, int max_segments = 400) {
    const double scale = std::max(a, 1.0);
    double lo = a;
    double hi = a + scale;
    double total = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    for (int k = 0; k < max_segments; ++k) {
        // tolerance relative to the integral's own magnitude, so tiny tails
        // (survival integrals deep past the bulk) stay fully resolved
        const double mid = 0.5 * (lo + hi);
        const double crude =
            std::fabs((hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi)));
        const double eps =
            rel_eps * std::max({std::fabs(total), crude, 1e-300});
        const double seg = adaptive_simpson(f, lo, hi, eps);
        total += seg;
        if (std::fabs(seg) <= rel_eps * std::max(std::fabs(total), 1e-300) && k > 0) return total;
        // stretched-exponential tails legitimately grow for ~10 doublings
        // before turning over; only sustained growth signals divergence
        if (std::fabs(seg) > std::fabs(prev)) {
            if (++growth_streak >= 16)
                throw std::runtime_error("integrate_to_infinity: integral not settling");
        } else {
            growth_streak = 0;
        }
        prev = seg;
        lo = hi;
        hi = a + (hi - a) * 2.0;
        if (!std::isfinite(hi)) break;
    }
    throw std::runtime_error("integrate_to_infinity: too many segments");
}

}  // namespace mrl

#endif
