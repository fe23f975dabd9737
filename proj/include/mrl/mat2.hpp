#ifndef MRL_MAT2_HPP
#define MRL_MAT2_HPP

#include <cmath>
#include <stdexcept>

namespace mrl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

// Symmetric storage is not enforced; callers keep m01 == m10 for covariances.
struct Mat2 {
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

    Mat2() = default;
    Mat2(double a, double b, double c, double d) : m00(a), m01(b), m10(c), m11(d) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }
    static Mat2 scaled_identity(double s) { return {s, 0.0, 0.0, s}; }

    double det() const { return m00 * m11 - m01 * m10; }
    double trace() const { return m00 + m11; }

    Mat2 operator+(const Mat2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Mat2 operator*(double s) const { return {m00 * s, m01 * s, m10 * s, m11 * s}; }

    Vec2 operator*(const Vec2& v) const {
        return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y};
    }

    Mat2 inverse() const {
        const double d = det();
        if (d == 0.0 || !std::isfinite(d))
            throw std::runtime_error("Mat2::inverse: singular matrix");
        const double s = 1.0 / d;
        return {m11 * s, -m01 * s, -m10 * s, m00 * s};
    }

    // Lower-triangular Cholesky factor; throws if not positive definite.
    Mat2 cholesky() const {
        if (m00 <= 0.0) throw std::runtime_error("Mat2::cholesky: not positive definite");
        const double l00 = std::sqrt(m00);
        const double l10 = m10 / l00;
        const double rem = m11 - l10 * l10;
        if (rem <= 0.0) throw std::runtime_error("Mat2::cholesky: not positive definite");
        return {l00, 0.0, l10, std::sqrt(rem)};
    }

    bool is_spd() const {
        return m00 > 0.0 && det() > 0.0 && std::isfinite(m00) && std::isfinite(m01) &&
               std::isfinite(m11);
    }
};

inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

// x' A y
inline double quad_form(const Vec2& x, const Mat2& a, const Vec2& y) {
    return x.dot(a * y);
}

}  // namespace mrl

#endif
