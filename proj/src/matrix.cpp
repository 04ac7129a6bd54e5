#include "ncosim/matrix.hpp"

#include <cmath>
#include <utility>

#include "ncosim/errors.hpp"

namespace ncosim {

namespace {

constexpr double kPivotFloor = 1e-12;

// In-place LU factorization with partial pivoting. perm[i] is the source row
// of factored row i.
void lu_factor(Matrix& a, std::vector<int>& perm) {
    const int n = a.rows();
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= kPivotFloor) throw SingularMatrix(k);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[k], perm[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
}

Vec lu_solve(const Matrix& lu, const std::vector<int>& perm, const Vec& b) {
    const int n = lu.rows();
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

}  // namespace

Vec solve_linear(Matrix a, Vec b) {
    std::vector<int> perm;
    lu_factor(a, perm);
    return lu_solve(a, perm, b);
}

Matrix invert(const Matrix& a) {
    const int n = a.rows();
    Matrix lu = a;
    std::vector<int> perm;
    lu_factor(lu, perm);
    Matrix out(n, n);
    Vec e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        Vec col = lu_solve(lu, perm, e);
        for (int i = 0; i < n; ++i) out(i, j) = col[i];
        e[j] = 0.0;
    }
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double v = a(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += v * b(k, j);
        }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace ncosim
