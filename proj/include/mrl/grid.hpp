#ifndef MRL_GRID_HPP
#define MRL_GRID_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mrl {

// Strictly increasing positive time grid.
struct Grid {
    std::vector<double> points;

    Grid() = default;
    explicit Grid(std::vector<double> pts) : points(std::move(pts)) { validate(); }

    std::size_t size() const { return points.size(); }
    double operator[](std::size_t i) const { return points[i]; }
    double front() const { return points.front(); }
    double back() const { return points.back(); }

    void validate() const {
        if (points.size() < 2) throw std::invalid_argument("Grid: need at least 2 points");
        if (!(points.front() > 0.0)) throw std::invalid_argument("Grid: points must be > 0");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i])) throw std::invalid_argument("Grid: non-finite point");
            if (i > 0 && !(points[i] > points[i - 1]))
                throw std::invalid_argument("Grid: points must be strictly increasing");
        }
    }

    static Grid log_spaced(double lo, double hi, std::size_t n) {
        if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("Grid: need 0 < lo < hi");
        if (n < 2) throw std::invalid_argument("Grid: need at least 2 points");
        std::vector<double> pts(n);
        const double llo = std::log(lo), lhi = std::log(hi);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
        pts.front() = lo;
        pts.back() = hi;
        return Grid(std::move(pts));
    }

    static Grid linear(double lo, double hi, std::size_t n) {
        if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("Grid: need 0 < lo < hi");
        if (n < 2) throw std::invalid_argument("Grid: need at least 2 points");
        std::vector<double> pts(n);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        return Grid(std::move(pts));
    }

    // default inference grid: log-spaced from min(data)/10 to 1.5 * max(data)
    static Grid default_for_data(const std::vector<double>& times, std::size_t n = 512) {
        if (times.empty()) throw std::invalid_argument("Grid: empty data");
        const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
        return log_spaced(*lo / 10.0, 1.5 * *hi, n);
    }
};

}  // namespace mrl

#endif
