#include "spaceform/linalg.hpp"

#include <algorithm>

namespace spaceform {

int rref_exact(std::vector<std::vector<Rational>>& m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t lead = 0;
    int rank = 0;
    for (std::size_t r = 0; r < rows && lead < cols; ++r) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][lead] == 0) ++pivot;
        if (pivot == rows) {
            --r;
            ++lead;
            continue;
        }
        std::swap(m[r], m[pivot]);
        Rational inv = Rational(1) / m[r][lead];
        for (std::size_t c = 0; c < cols; ++c) m[r][c] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][lead] == 0) continue;
            Rational f = m[i][lead];
            for (std::size_t c = 0; c < cols; ++c) m[i][c] -= f * m[r][c];
        }
        ++lead;
        ++rank;
    }
    return rank;
}

int rref_double(std::vector<std::vector<double>>& m, double pivot_tol) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    double scale = 0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0) return 0;
    const double tol = pivot_tol * scale;

    std::size_t lead = 0;
    int rank = 0;
    for (std::size_t r = 0; r < rows && lead < cols; ++r) {
        std::size_t pivot = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(m[i][lead]) > std::abs(m[pivot][lead])) pivot = i;
        if (std::abs(m[pivot][lead]) <= tol) {
            for (std::size_t i = r; i < rows; ++i) m[i][lead] = 0;
            --r;
            ++lead;
            continue;
        }
        std::swap(m[r], m[pivot]);
        double inv = 1.0 / m[r][lead];
        for (std::size_t c = 0; c < cols; ++c) m[r][c] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            double f = m[i][lead];
            if (f == 0) continue;
            for (std::size_t c = 0; c < cols; ++c) m[i][c] -= f * m[r][c];
        }
        ++lead;
        ++rank;
    }
    return rank;
}

namespace {

template <int N>
ExactSolveResult<N> solve_exact_impl(const Mat<Rational, N>& a, const Vec<Rational, N>& b) {
    // Reduce the augmented system [A | b].
    std::vector<std::vector<Rational>> aug(N, std::vector<Rational>(N + 1));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
        aug[static_cast<std::size_t>(i)][N] = b[i];
    }
    std::vector<std::vector<Rational>> plain(N, std::vector<Rational>(N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) plain[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);

    ExactSolveResult<N> out;
    out.rank = rref_exact(plain);
    int aug_rank = rref_exact(aug);
    out.consistent = (aug_rank == out.rank);

    if (out.consistent) {
        // Read a particular solution off the reduced augmented matrix.
        Vec<Rational, N> x{};
        for (const auto& row : aug) {
            int lead = -1;
            for (int j = 0; j < N; ++j)
                if (row[static_cast<std::size_t>(j)] != 0) {
                    lead = j;
                    break;
                }
            if (lead >= 0) x[lead] = row[N];
        }
        out.solution = x;
    }
    // Null-space basis from the reduced plain matrix.
    std::array<int, N> lead_of_col;
    lead_of_col.fill(-1);
    {
        int r = 0;
        for (const auto& row : plain) {
            for (int j = 0; j < N; ++j)
                if (row[static_cast<std::size_t>(j)] != 0) {
                    lead_of_col[static_cast<std::size_t>(j)] = r;
                    break;
                }
            ++r;
        }
    }
    for (int j = 0; j < N; ++j) {
        if (lead_of_col[static_cast<std::size_t>(j)] != -1) continue;
        Vec<Rational, N> v{};
        v[j] = 1;
        for (int i = 0; i < N; ++i) {
            if (lead_of_col[static_cast<std::size_t>(i)] == -1) continue;
            int row = lead_of_col[static_cast<std::size_t>(i)];
            v[i] = -plain[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        }
        out.null_basis.push_back(v);
    }
    return out;
}

template <int N>
FloatSolveResult<N> solve_float_impl(const Mat<double, N>& a, const Vec<double, N>& b, double sv_tol) {
    // SVD of A through the symmetric eigenproblem of AtA.
    Mat<double, N> ata = a.transposed() * a;
    Vec<double, N> evals;
    Mat<double, N> evecs;
    symmetric_eigen(ata, evals, evecs);

    FloatSolveResult<N> out;
    double sv_max = std::sqrt(std::max(0.0, evals[N - 1]));
    double cutoff = sv_tol * std::max(1.0, sv_max);

    Vec<double, N> x{};
    Vec<double, N> proj{};  // projection of b onto range(A)
    for (int k = 0; k < N; ++k) {
        double sv = std::sqrt(std::max(0.0, evals[static_cast<std::size_t>(k)]));
        Vec<double, N> vk;
        for (int i = 0; i < N; ++i) vk[i] = evecs(i, k);
        if (sv <= cutoff) {
            out.null_basis.push_back(vk);
            continue;
        }
        ++out.rank;
        Vec<double, N> uk = a * vk;
        uk = uk * (1.0 / sv);
        double coef = uk.dot(b);
        proj = proj + uk * coef;
        x = x + vk * (coef / sv);
    }
    double resid = norm(b - proj);
    out.consistent = resid <= sv_tol * std::max(1.0, norm(b));
    out.solution = x;
    return out;
}

}  // namespace

ExactSolveResult<2> solve_exact(const Mat2r& a, const Vec2r& b) { return solve_exact_impl<2>(a, b); }
ExactSolveResult<3> solve_exact(const Mat3r& a, const Vec3r& b) { return solve_exact_impl<3>(a, b); }
FloatSolveResult<2> solve_float(const Mat2d& a, const Vec2d& b, double sv_tol) {
    return solve_float_impl<2>(a, b, sv_tol);
}
FloatSolveResult<3> solve_float(const Mat3d& a, const Vec3d& b, double sv_tol) {
    return solve_float_impl<3>(a, b, sv_tol);
}

}  // namespace spaceform
