#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hrlab {

/// Dense row-major matrix of doubles. Biases and vectors are stored as 1xN.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    Matrix transposed() const;
    bool all_finite() const;
    double frobenius_norm() const;

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// C = A * B^T.  A: m x k, B: n x k, C: m x n.  The transposed layout keeps
// both inner loops contiguous, which matters for the training hot path.
Matrix matmul_bt(const Matrix& a, const Matrix& b);

// C = A^T * B.  A: k x m, B: k x n, C: m x n.
Matrix matmul_at(const Matrix& a, const Matrix& b);

// C = A * B.  A: m x k, B: k x n.
Matrix matmul(const Matrix& a, const Matrix& b);

void add_row_inplace(Matrix& m, const Matrix& row);  // row: 1 x cols
Matrix column_sums(const Matrix& m);                 // 1 x cols

inline void check(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace hrlab
