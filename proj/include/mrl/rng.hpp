#ifndef MRL_RNG_HPP
#define MRL_RNG_HPP

// Deterministic random-variate stream. One stream per chain; the variate
// transforms are implemented here (not via std:: distributions) so a seed
// reproduces the same sequence on any compiler.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "mrl/mat2.hpp"

namespace mrl {

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // substream with a deterministically derived seed (splitmix64 step)
    RngStream spawn(std::uint64_t salt) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (salt + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return RngStream(z ^ (z >> 31));
    }

    // uniform on the open interval (0, 1)
    double uniform() {
        const std::uint64_t r = eng_() >> 11;  // 53 bits
        return (static_cast<double>(r) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        return -std::log(uniform()) / rate;
    }

    // Marsaglia-Tsang; boosted for shape < 1
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw std::invalid_argument("gamma: shape and rate must be > 0");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    // kept strictly inside (0,1): the ratio can round to an endpoint when one
    // gamma draw dwarfs the other
    double beta(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("beta: parameters must be > 0");
        const double x = gamma(a, 1.0);
        const double y = gamma(b, 1.0);
        double r = x / (x + y);
        if (r <= 0.0) r = 1e-300;
        if (r >= 1.0) r = 1.0 - 1e-16;
        return r;
    }

    double chi_squared(double df) { return gamma(0.5 * df, 0.5); }

    // N2(mean, cov); near-singular covariances get one shot of diagonal
    // jitter 1e-10 * trace before giving up.
    Vec2 normal2(const Vec2& mean, const Mat2& cov) {
        Mat2 chol;
        try {
            chol = cov.cholesky();
        } catch (const std::runtime_error&) {
            const double jitter = 1e-10 * cov.trace();
            const Mat2 bumped{cov.m00 + jitter, cov.m01, cov.m10, cov.m11 + jitter};
            chol = bumped.cholesky();  // rethrows if still not PD
        }
        const double z0 = normal();
        const double z1 = normal();
        return {mean.x + chol.m00 * z0, mean.y + chol.m10 * z0 + chol.m11 * z1};
    }

    // Wishart(df, scale) via Bartlett decomposition, d = 2
    Mat2 wishart(double df, const Mat2& scale) {
        if (!(df > 1.0)) throw std::invalid_argument("wishart: df must exceed d - 1 = 1");
        const Mat2 l = scale.cholesky();
        const double a00 = std::sqrt(chi_squared(df));
        const double a10 = normal();
        const double a11 = std::sqrt(chi_squared(df - 1.0));
        // T = L * A, lower triangular; W = T T'
        const double t00 = l.m00 * a00;
        const double t10 = l.m10 * a00 + l.m11 * a10;
        const double t11 = l.m11 * a11;
        return {t00 * t00, t00 * t10, t00 * t10, t10 * t10 + t11 * t11};
    }

    // Sigma ~ InvWishart(df, scale): invert a Wishart(df, scale^{-1}) draw
    Mat2 inv_wishart(double df, const Mat2& scale) {
        if (!scale.is_spd()) throw std::invalid_argument("inv_wishart: scale must be SPD");
        const Mat2 w = wishart(df, scale.inverse());
        return w.inverse();
    }

    // index draw from (unnormalized) nonnegative weights
    int categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0 || !std::isfinite(w))
                throw std::invalid_argument("categorical: weights must be finite and >= 0");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("categorical: all weights zero");
        double u = uniform() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u <= 0.0) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mrl

#endif
