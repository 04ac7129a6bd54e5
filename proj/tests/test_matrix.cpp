#include <cmath>

#include "doctest.h"
#include "ncosim/errors.hpp"
#include "ncosim/matrix.hpp"
#include "ncosim/rng.hpp"

using namespace ncosim;

namespace {

Matrix random_dominant(int n, Rng& rng) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.uniform() - 1.0;
    for (int i = 0; i < n; ++i) a(i, i) += static_cast<double>(n) + 1.0;
    return a;
}

Vec matvec(const Matrix& a, const Vec& x) {
    Vec y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace

TEST_CASE("solve_linear on the identity returns the rhs") {
    const Vec x = solve_linear(Matrix::identity(4), {1, 2, 3, 4});
    for (int i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(i + 1.0).epsilon(1e-14));
}

TEST_CASE("solve_linear on a diagonal system") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 4.0;
    const Vec x = solve_linear(a, {2, 8});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("solve_linear recovers a planted solution") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = random_dominant(4, rng);
        Vec xstar(4);
        for (double& v : xstar) v = 2.0 * rng.uniform() - 1.0;
        const Vec b = matvec(a, xstar);
        const Vec x = solve_linear(a, b);
        for (int i = 0; i < 4; ++i) CHECK(std::fabs(x[i] - xstar[i]) < 1e-9);

        Vec resid = matvec(a, x);
        for (int i = 0; i < 4; ++i) resid[i] -= b[i];
        CHECK(inf_norm(resid) <= 1e-9 * (1.0 + inf_norm(b)));
    }
}

TEST_CASE("invert identity and diagonal matrices") {
    CHECK(max_abs_diff(invert(Matrix::identity(4)), Matrix::identity(4)) < 1e-14);
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 0.5;
    const Matrix inv = invert(a);
    CHECK(inv(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(inv(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(inv(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("invert of a random SPD matrix multiplies back to the identity") {
    Rng rng(11);
    Matrix g(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) g(i, j) = 2.0 * rng.uniform() - 1.0;
    Matrix a = matmul(transpose(g), g);
    for (int i = 0; i < 8; ++i) a(i, i) += 0.5;
    CHECK(max_abs_diff(matmul(a, invert(a)), Matrix::identity(8)) < 1e-8);
    CHECK(max_abs_diff(invert(invert(a)), a) < 1e-8);
}

TEST_CASE("singular matrix reports the failing pivot") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;
    CHECK_THROWS_AS(solve_linear(a, {1, 1}), SingularMatrix);
    try {
        invert(a);
        FAIL("expected SingularMatrix");
    } catch (const SingularMatrix& e) {
        CHECK(e.pivot_index == 1);
    }
}

TEST_CASE("matmul and transpose satisfy (AB)^T = B^T A^T") {
    Rng rng(3);
    Matrix a(3, 4), b(4, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = rng.uniform();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) = rng.uniform();
    CHECK(max_abs_diff(transpose(matmul(a, b)), matmul(transpose(b), transpose(a))) < 1e-14);
}
