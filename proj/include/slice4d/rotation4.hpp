#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "slice4d/errors.hpp"

namespace slice4d {

// Axis indices in the fixed x, y, z, w order.
enum Axis : int { kX = 0, kY = 1, kZ = 2, kW = 3 };

/// The six coordinate planes of 4-space.
enum class Plane { XY, XZ, XW, YZ, YW, ZW };

/// The three pairs of absolutely perpendicular coordinate planes.
enum class DoublePlane { XY_ZW, XZ_YW, XW_YZ };

inline constexpr std::array<Plane, 6> kAllPlanes{Plane::XY, Plane::XZ, Plane::XW,
                                                 Plane::YZ, Plane::YW, Plane::ZW};
inline constexpr std::array<DoublePlane, 3> kAllDoublePlanes{
    DoublePlane::XY_ZW, DoublePlane::XZ_YW, DoublePlane::XW_YZ};

/// Axes spanned by a plane. The first axis carries the (cos, -sin) row.
constexpr std::pair<int, int> axes(Plane plane) {
    switch (plane) {
        case Plane::XY: return {kX, kY};
        case Plane::XZ: return {kX, kZ};
        case Plane::XW: return {kX, kW};
        case Plane::YZ: return {kY, kZ};
        case Plane::YW: return {kY, kW};
        case Plane::ZW: return {kZ, kW};
    }
    return {kX, kY};
}

/// Product of the 1-based axis numbers (x=1 .. w=4); doubles as the key code.
constexpr int axis_product(Plane plane) {
    const auto [i, j] = axes(plane);
    return (i + 1) * (j + 1);
}

constexpr std::pair<Plane, Plane> planes(DoublePlane pair) {
    switch (pair) {
        case DoublePlane::XY_ZW: return {Plane::XY, Plane::ZW};
        case DoublePlane::XZ_YW: return {Plane::XZ, Plane::YW};
        case DoublePlane::XW_YZ: return {Plane::XW, Plane::YZ};
    }
    return {Plane::XY, Plane::ZW};
}

inline std::string to_string(Plane plane) {
    constexpr const char* names[] = {"XY", "XZ", "XW", "YZ", "YW", "ZW"};
    return names[static_cast<int>(plane)];
}

inline std::string to_string(DoublePlane pair) {
    constexpr const char* names[] = {"XY_ZW", "XZ_YW", "XW_YZ"};
    return names[static_cast<int>(pair)];
}

/// Rotation angle in radians. Always finite.
class Angle {
public:
    constexpr Angle() = default;

    explicit Angle(double radians) : radians_(radians) {
        if (!std::isfinite(radians)) throw NonFiniteValue("angle must be finite");
    }

    constexpr double radians() const noexcept { return radians_; }

    Angle operator-() const { return Angle(-radians_); }
    friend Angle operator+(Angle a, Angle b) { return Angle(a.radians_ + b.radians_); }
    friend Angle operator-(Angle a, Angle b) { return Angle(a.radians_ - b.radians_); }
    friend bool operator==(Angle, Angle) = default;

private:
    double radians_ = 0.0;
};

struct Point4 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;

    constexpr double operator[](std::size_t i) const {
        return i == 0 ? x : i == 1 ? y : i == 2 ? z : w;
    }

    friend constexpr Point4 operator+(const Point4& a, const Point4& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z, a.w + b.w};
    }
    friend constexpr Point4 operator-(const Point4& a, const Point4& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z, a.w - b.w};
    }
    friend constexpr Point4 operator*(double s, const Point4& p) {
        return {s * p.x, s * p.y, s * p.z, s * p.w};
    }
    friend bool operator==(const Point4&, const Point4&) = default;
};

inline double dot(const Point4& a, const Point4& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z + a.w * b.w;
}

inline double norm(const Point4& p) { return std::sqrt(dot(p, p)); }

inline double distance(const Point4& a, const Point4& b) { return norm(a - b); }

/// Plain dense 4x4 matrix, row-major in x-y-z-w order. No invariants.
struct Matrix4 {
    std::array<double, 16> m{};

    static constexpr Matrix4 identity() {
        Matrix4 r;
        for (int i = 0; i < 4; ++i) r.m[i * 5] = 1.0;
        return r;
    }

    constexpr double& operator()(int row, int col) { return m[row * 4 + col]; }
    constexpr double operator()(int row, int col) const { return m[row * 4 + col]; }

    Matrix4 transposed() const {
        Matrix4 t;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) t(i, j) = (*this)(j, i);
        return t;
    }

    friend Matrix4 operator*(const Matrix4& a, const Matrix4& b) {
        Matrix4 c;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
                c(i, j) = s;
            }
        return c;
    }

    friend bool operator==(const Matrix4&, const Matrix4&) = default;
};

inline double frobenius_distance(const Matrix4& a, const Matrix4& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        const double d = a.m[i] - b.m[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// ||m^T m - I||_F
inline double orthonormality_error(const Matrix4& m) {
    return frobenius_distance(m.transposed() * m, Matrix4::identity());
}

inline double determinant(const Matrix4& a) {
    // Laplace expansion over 2x2 minors of the top and bottom row pairs.
    const double s0 = a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1);
    const double s1 = a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2);
    const double s2 = a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3);
    const double s3 = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
    const double s4 = a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3);
    const double s5 = a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3);
    const double c5 = a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3);
    const double c4 = a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3);
    const double c3 = a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2);
    const double c2 = a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3);
    const double c1 = a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2);
    const double c0 = a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1);
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

inline constexpr double kOrthonormalityTolerance = 1e-9;
// compose() renormalizes once drift exceeds this.
inline constexpr double kComposeDriftThreshold = 1e-12;
// renormalize() refuses input further than this from orthonormal.
inline constexpr double kRenormalizeMaxError = 1e-3;

class Rotation4;
inline Rotation4 simple_rotation(Plane plane, Angle theta);
inline Rotation4 double_rotation(DoublePlane pair, Angle alpha, Angle beta);
inline Rotation4 compose(const Rotation4& a, const Rotation4& b);
inline Rotation4 inverse(const Rotation4& r);
inline Rotation4 renormalize(const Matrix4& m);

/// A proper rotation of 4-space stored as an orthonormal 4x4 matrix with
/// determinant +1. Rotations act on column vectors: p' = R p.
class Rotation4 {
public:
    Rotation4() : m_(Matrix4::identity()) {}

    static Rotation4 identity() { return Rotation4(); }

    /// Validates the special-orthogonal invariants; throws NotARotation.
    static Rotation4 from_matrix(const Matrix4& m) {
        for (double v : m.m)
            if (!std::isfinite(v)) throw NotARotation("matrix has non-finite entries");
        if (orthonormality_error(m) > kOrthonormalityTolerance)
            throw NotARotation("matrix is not orthonormal");
        if (std::abs(determinant(m) - 1.0) > kOrthonormalityTolerance)
            throw NotARotation("matrix determinant is not +1");
        return Rotation4(m);
    }

    static Rotation4 from_row_major(const std::array<double, 16>& values) {
        return from_matrix(Matrix4{values});
    }

    const Matrix4& matrix() const noexcept { return m_; }
    const std::array<double, 16>& row_major() const noexcept { return m_.m; }
    double operator()(int row, int col) const { return m_(row, col); }

    friend bool operator==(const Rotation4&, const Rotation4&) = default;

private:
    explicit Rotation4(const Matrix4& m) : m_(m) {}

    Matrix4 m_;

    friend Rotation4 simple_rotation(Plane, Angle);
    friend Rotation4 double_rotation(DoublePlane, Angle, Angle);
    friend Rotation4 compose(const Rotation4&, const Rotation4&);
    friend Rotation4 inverse(const Rotation4&);
    friend Rotation4 renormalize(const Matrix4&);
};

namespace detail {

inline void place_block(Matrix4& m, Plane plane, double theta) {
    const auto [i, j] = axes(plane);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    m(i, i) = c;
    m(i, j) = -s;
    m(j, i) = s;
    m(j, j) = c;
}

}  // namespace detail

/// Identity with the block [cos, -sin; sin, cos] on the plane's two axes.
inline Rotation4 simple_rotation(Plane plane, Angle theta) {
    Matrix4 m = Matrix4::identity();
    detail::place_block(m, plane, theta.radians());
    return Rotation4(m);
}

/// R_first(alpha) * R_second(beta). The blocks are disjoint so the factors
/// commute and the result is assembled directly.
inline Rotation4 double_rotation(DoublePlane pair, Angle alpha, Angle beta) {
    const auto [first, second] = planes(pair);
    Matrix4 m = Matrix4::identity();
    detail::place_block(m, first, alpha.radians());
    detail::place_block(m, second, beta.radians());
    return Rotation4(m);
}

/// Returns a * b, i.e. b is applied first. Renormalizes only when the raw
/// product drifts past kComposeDriftThreshold.
inline Rotation4 compose(const Rotation4& a, const Rotation4& b) {
    const Matrix4 product = a.m_ * b.m_;
    if (orthonormality_error(product) > kComposeDriftThreshold) return renormalize(product);
    return Rotation4(product);
}

inline Rotation4 inverse(const Rotation4& r) { return Rotation4(r.m_.transposed()); }

inline Point4 apply_point(const Rotation4& r, const Point4& p) {
    const Matrix4& m = r.matrix();
    Point4 out;
    out.x = m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2) * p.z + m(0, 3) * p.w;
    out.y = m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2) * p.z + m(1, 3) * p.w;
    out.z = m(2, 0) * p.x + m(2, 1) * p.y + m(2, 2) * p.z + m(2, 3) * p.w;
    out.w = m(3, 0) * p.x + m(3, 1) * p.y + m(3, 2) * p.z + m(3, 3) * p.w;
    return out;
}

/// Modified Gram-Schmidt over the rows, in order. Input must be within
/// kRenormalizeMaxError of orthonormal and have positive determinant.
inline Rotation4 renormalize(const Matrix4& m) {
    for (double v : m.m)
        if (!std::isfinite(v)) throw DegenerateMatrix("matrix has non-finite entries");
    if (orthonormality_error(m) > kRenormalizeMaxError)
        throw DegenerateMatrix("matrix is too far from orthonormal to renormalize");

    Matrix4 q = m;
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < i; ++k) {
            double proj = 0.0;
            for (int j = 0; j < 4; ++j) proj += q(i, j) * q(k, j);
            for (int j = 0; j < 4; ++j) q(i, j) -= proj * q(k, j);
        }
        double len = 0.0;
        for (int j = 0; j < 4; ++j) len += q(i, j) * q(i, j);
        len = std::sqrt(len);
        if (len < 1e-12) throw DegenerateMatrix("row " + std::to_string(i) + " collapsed");
        for (int j = 0; j < 4; ++j) q(i, j) /= len;
    }
    if (determinant(q) < 0.0) throw DegenerateMatrix("matrix is a reflection");
    return Rotation4(q);
}

inline Rotation4 renormalize(const Rotation4& r) { return renormalize(r.matrix()); }

inline double frobenius_distance(const Rotation4& a, const Rotation4& b) {
    return frobenius_distance(a.matrix(), b.matrix());
}

}  // namespace slice4d
