#ifndef REVHENON_GEOMETRY_HPP
#define REVHENON_GEOMETRY_HPP

#include <cmath>
#include <complex>

namespace revhenon {

/// A point of the plane; the state of every map in the catalog.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double max_norm(Point2 p) { return std::max(std::fabs(p.x), std::fabs(p.y)); }

inline double dist_max(Point2 a, Point2 b) { return max_norm(a - b); }

/// 2x2 real matrix, row major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
};

inline Mat2 operator*(const Mat2& A, const Mat2& B) {
    return {A.a11 * B.a11 + A.a12 * B.a21, A.a11 * B.a12 + A.a12 * B.a22,
            A.a21 * B.a11 + A.a22 * B.a21, A.a21 * B.a12 + A.a22 * B.a22};
}

inline Point2 operator*(const Mat2& A, Point2 v) {
    return {A.a11 * v.x + A.a12 * v.y, A.a21 * v.x + A.a22 * v.y};
}

inline Mat2 operator-(const Mat2& A) { return {-A.a11, -A.a12, -A.a21, -A.a22}; }

/// Eigenvalues of a 2x2 matrix given trace and determinant.
inline std::pair<std::complex<double>, std::complex<double>> eigenvalues(double trace, double det) {
    const double disc = trace * trace - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>(0.5 * (trace - s), 0.0),
                std::complex<double>(0.5 * (trace + s), 0.0)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * trace, -im), std::complex<double>(0.5 * trace, im)};
}

}  // namespace revhenon

#endif
