#include "hrlab/matrix.hpp"

#include <cmath>

namespace hrlab {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    check(a.cols() == b.cols(), "matmul_bt: inner dimension mismatch");
    Matrix c(a.rows(), b.rows());
    const std::size_t k = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ar = a.row_ptr(i);
        double* cr = c.row_ptr(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* br = b.row_ptr(j);
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += ar[t] * br[t];
            cr[j] = s;
        }
    }
    return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
    check(a.rows() == b.rows(), "matmul_at: inner dimension mismatch");
    Matrix c(a.cols(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t t = 0; t < a.rows(); ++t) {
        const double* ar = a.row_ptr(t);
        const double* br = b.row_ptr(t);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            double* cr = c.row_ptr(i);
            const double av = ar[i];
            for (std::size_t j = 0; j < n; ++j) cr[j] += av * br[j];
        }
    }
    return c;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    check(a.cols() == b.rows(), "matmul: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ar = a.row_ptr(i);
        double* cr = c.row_ptr(i);
        for (std::size_t t = 0; t < a.cols(); ++t) {
            const double av = ar[t];
            const double* br = b.row_ptr(t);
            for (std::size_t j = 0; j < n; ++j) cr[j] += av * br[j];
        }
    }
    return c;
}

void add_row_inplace(Matrix& m, const Matrix& row) {
    check(row.rows() == 1 && row.cols() == m.cols(), "add_row_inplace: shape mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double* mr = m.row_ptr(i);
        const double* rr = row.row_ptr(0);
        for (std::size_t j = 0; j < m.cols(); ++j) mr[j] += rr[j];
    }
}

Matrix column_sums(const Matrix& m) {
    Matrix s(1, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* mr = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols(); ++j) s(0, j) += mr[j];
    }
    return s;
}

}  // namespace hrlab
