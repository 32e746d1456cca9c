#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spaceform/rational.hpp"

namespace spaceform {

template <class T, int N>
struct Vec {
    std::array<T, N> c{};

    Vec() = default;
    Vec(std::initializer_list<T> init) {
        int i = 0;
        for (const T& v : init) {
            if (i >= N) throw std::invalid_argument("too many vector components");
            c[static_cast<std::size_t>(i++)] = v;
        }
    }

    T& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    const T& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec operator+(const Vec& o) const {
        Vec r;
        for (int i = 0; i < N; ++i) r[i] = (*this)[i] + o[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r;
        for (int i = 0; i < N; ++i) r[i] = (*this)[i] - o[i];
        return r;
    }
    Vec operator-() const {
        Vec r;
        for (int i = 0; i < N; ++i) r[i] = -(*this)[i];
        return r;
    }
    Vec operator*(const T& s) const {
        Vec r;
        for (int i = 0; i < N; ++i) r[i] = (*this)[i] * s;
        return r;
    }
    bool operator==(const Vec& o) const { return c == o.c; }

    T dot(const Vec& o) const {
        T s{};
        for (int i = 0; i < N; ++i) s += (*this)[i] * o[i];
        return s;
    }
    T norm2() const { return dot(*this); }
};

template <class T, int N>
struct Mat {
    // Row-major.
    std::array<T, static_cast<std::size_t>(N) * N> a{};

    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i * N + j)]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * N + j)]; }

    static Mat identity() {
        Mat m;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = (i == j) ? T(1) : T(0);
        return m;
    }

    Mat operator*(const Mat& o) const {
        Mat r;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                T s{};
                for (int k = 0; k < N; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Vec<T, N> operator*(const Vec<T, N>& v) const {
        Vec<T, N> r;
        for (int i = 0; i < N; ++i) {
            T s{};
            for (int k = 0; k < N; ++k) s += (*this)(i, k) * v[k];
            r[i] = s;
        }
        return r;
    }
    Mat operator+(const Mat& o) const {
        Mat r;
        for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r;
        for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Mat operator*(const T& s) const {
        Mat r;
        for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * s;
        return r;
    }
    bool operator==(const Mat& o) const { return a == o.a; }

    Mat transposed() const {
        Mat r;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
};

using Vec2d = Vec<double, 2>;
using Vec3d = Vec<double, 3>;
using Vec4d = Vec<double, 4>;
using Mat2d = Mat<double, 2>;
using Mat3d = Mat<double, 3>;
using Mat4d = Mat<double, 4>;
using Vec2r = Vec<Rational, 2>;
using Vec3r = Vec<Rational, 3>;
using Mat2r = Mat<Rational, 2>;
using Mat3r = Mat<Rational, 3>;

template <class T, int N>
T det(const Mat<T, N>& m) {
    if constexpr (N == 2) {
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    } else if constexpr (N == 3) {
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    } else {
        // Cofactor expansion along the first row; N is small here.
        T s{};
        for (int j = 0; j < N; ++j) {
            Mat<T, N - 1> minor;
            for (int r = 1; r < N; ++r) {
                int cc = 0;
                for (int c2 = 0; c2 < N; ++c2) {
                    if (c2 == j) continue;
                    minor(r - 1, cc++) = m(r, c2);
                }
            }
            T term = m(0, j) * det(minor);
            s += (j % 2 == 0) ? term : -term;
        }
        return s;
    }
}

template <int N>
double norm(const Vec<double, N>& v) {
    return std::sqrt(v.norm2());
}

template <int N>
Vec<double, N> normalized(const Vec<double, N>& v) {
    double n = norm(v);
    if (n < 1e-300) throw std::domain_error("cannot normalize zero vector");
    return v * (1.0 / n);
}

inline Vec3d cross(const Vec3d& a, const Vec3d& b) {
    return Vec3d{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T, int N>
Vec<double, N> to_double(const Vec<T, N>& v) {
    Vec<double, N> r;
    for (int i = 0; i < N; ++i) r[i] = to_double(v[i]);
    return r;
}
template <class T, int N>
Mat<double, N> to_double(const Mat<T, N>& m) {
    Mat<double, N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = to_double(m(i, j));
    return r;
}

template <int N>
double max_abs(const Mat<double, N>& m) {
    double r = 0;
    for (double v : m.a) r = std::max(r, std::abs(v));
    return r;
}
template <int N>
double max_abs(const Vec<double, N>& v) {
    double r = 0;
    for (double x : v.c) r = std::max(r, std::abs(x));
    return r;
}
template <int N>
double frobenius(const Mat<double, N>& m) {
    double s = 0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Eigenvalues in
// ascending order; columns of the returned matrix are the eigenvectors.
template <int N>
void symmetric_eigen(Mat<double, N> m, Vec<double, N>& values, Mat<double, N>& vectors) {
    vectors = Mat<double, N>::identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) {
                if (std::abs(m(p, q)) < 1e-300) continue;
                double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double cth = 1.0 / std::sqrt(t * t + 1.0);
                double sth = t * cth;
                for (int k = 0; k < N; ++k) {
                    double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = cth * mkp - sth * mkq;
                    m(k, q) = sth * mkp + cth * mkq;
                }
                for (int k = 0; k < N; ++k) {
                    double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = cth * mpk - sth * mqk;
                    m(q, k) = sth * mpk + cth * mqk;
                }
                for (int k = 0; k < N; ++k) {
                    double vkp = vectors(k, p), vkq = vectors(k, q);
                    vectors(k, p) = cth * vkp - sth * vkq;
                    vectors(k, q) = sth * vkp + cth * vkq;
                }
            }
    }
    // Sort ascending, permuting columns alongside.
    std::array<int, static_cast<std::size_t>(N)> order;
    for (int i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (m(order[j], order[j]) < m(order[i], order[i]))
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    Mat<double, N> sorted_vecs;
    for (int i = 0; i < N; ++i) {
        int oi = order[static_cast<std::size_t>(i)];
        values[i] = m(oi, oi);
        for (int k = 0; k < N; ++k) sorted_vecs(k, i) = vectors(k, oi);
    }
    vectors = sorted_vecs;
}

// Reduced row echelon form over an exact field; returns the rank.
int rref_exact(std::vector<std::vector<Rational>>& m);

// Row echelon reduction over doubles with relative pivot threshold; returns rank
// and (optionally) an orthonormal-ish basis of the null space of the COLUMN space
// interpretation handled by callers.
int rref_double(std::vector<std::vector<double>>& m, double pivot_tol);

// Solve A x = b exactly. Returns (rank of A, one solution if consistent).
template <int N>
struct ExactSolveResult {
    int rank = 0;
    bool consistent = false;
    Vec<Rational, N> solution{};
    // Null-space basis of A (fixed directions).
    std::vector<Vec<Rational, N>> null_basis;
};
ExactSolveResult<2> solve_exact(const Mat2r& a, const Vec2r& b);
ExactSolveResult<3> solve_exact(const Mat3r& a, const Vec3r& b);

// Least-squares analysis of A x = b with singular-value threshold.
template <int N>
struct FloatSolveResult {
    int rank = 0;
    bool consistent = false;  // residual below tolerance
    Vec<double, N> solution{};
    std::vector<Vec<double, N>> null_basis;
};
FloatSolveResult<2> solve_float(const Mat2d& a, const Vec2d& b, double sv_tol);
FloatSolveResult<3> solve_float(const Mat3d& a, const Vec3d& b, double sv_tol);

}  // namespace spaceform
