#pragma once

#include <algorithm>
#include <vector>

namespace ncosim {

using Vec = std::vector<double>;

// Small dense row-major matrix; intended sizes <= 16x16.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    void fill(double value) { std::fill(data_.begin(), data_.end(), value); }

    bool operator==(const Matrix&) const = default;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// LU with partial pivoting; pivot magnitude <= 1e-12 raises SingularMatrix
// with the offending pivot index.
Vec solve_linear(Matrix a, Vec b);
Matrix invert(const Matrix& a);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double inf_norm(const Vec& v);

}  // namespace ncosim
