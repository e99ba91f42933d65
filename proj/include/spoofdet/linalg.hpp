// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace spoofdet {

// In-place Cholesky of a symmetric positive-definite d x d row-major
// matrix; the lower triangle receives L (upper left untouched garbage).
// Returns false when the matrix is not positive definite.
bool cholesky_lower(std::vector<double>& a, std::size_t d);

// Solves L y = b with L lower-triangular from cholesky_lower.
void forward_solve(const std::vector<double>& l, std::size_t d,
                   const double* b, double* y);

// 2 * sum(log diag(L)), the log-determinant of the factored matrix.
double cholesky_log_det(const std::vector<double>& l, std::size_t d);

}  // namespace spoofdet
