#pragma once

#include <vector>

#include "hrlab/matrix.hpp"

namespace hrlab {

/// Singular values of m, sorted descending, all >= 0 (tiny negative roundoff
/// is clamped to zero). Length min(rows, cols). One-sided Jacobi
/// orthogonalization; adequate for desk-scale matrices.
/// Throws std::invalid_argument on empty or non-finite input.
std::vector<double> singular_values(const Matrix& m);

}  // namespace hrlab
