#include "hrlab/svd.hpp"

#include <algorithm>
#include <cmath>

namespace hrlab {

// One-sided Jacobi: rotate column pairs of a tall copy of the input until all
// pairs are numerically orthogonal; the singular values are then the column
// norms.
std::vector<double> singular_values(const Matrix& m) {
    check(!m.empty(), "singular_values: empty matrix");
    check(m.all_finite(), "singular_values: non-finite entries");

    Matrix b = m.rows() >= m.cols() ? m : m.transposed();
    const std::size_t r = b.rows();
    const std::size_t c = b.cols();

    auto col_dot = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t t = 0; t < r; ++t) s += b(t, i) * b(t, j);
        return s;
    };

    const double tol = 1e-14;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool converged = true;
        for (std::size_t i = 0; i + 1 < c; ++i) {
            for (std::size_t j = i + 1; j < c; ++j) {
                const double alpha = col_dot(i, i);
                const double beta = col_dot(j, j);
                const double gamma = col_dot(i, j);
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0)
                    continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t k = 0; k < r; ++k) {
                    const double bi = b(k, i);
                    const double bj = b(k, j);
                    b(k, i) = cs * bi - sn * bj;
                    b(k, j) = sn * bi + cs * bj;
                }
            }
        }
        if (converged) break;
    }

    std::vector<double> sv(c);
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < r; ++t) s += b(t, j) * b(t, j);
        sv[j] = std::sqrt(std::max(0.0, s));
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

}  // namespace hrlab
