// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "spoofdet/matrix.hpp"

namespace spoofdet {

struct KernelFunction {
    bool rbf = false;
    double gamma = 0.0;

    double operator()(const double* a, const double* b, std::size_t d) const;
};

// Kernel rows against a fixed training matrix; dense when the full Gram
// matrix fits the budget, otherwise an LRU row cache.
class KernelCache {
public:
    KernelCache(const LabeledMatrix& x, KernelFunction kernel,
                std::size_t budget_bytes);

    const double* row(std::size_t i);
    bool dense() const { return dense_; }

private:
    const LabeledMatrix& x_;
    KernelFunction kernel_;
    bool dense_;
    std::vector<double> storage_;
    // LRU bookkeeping when sparse
    std::vector<std::int32_t> slot_of_row_;
    std::vector<std::int32_t> row_of_slot_;
    std::vector<std::uint64_t> last_used_;
    std::uint64_t tick_ = 0;

    void fill_row(std::size_t i, double* out) const;
};

struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
    double final_violation = 0.0;
    std::uint64_t pair_updates = 0;
    bool converged = false;
};

// Maximal-violating-pair SMO for the soft-margin dual:
//   min 1/2 a^T Q a - e^T a   s.t. 0 <= a_i <= C, sum a_i y_i = 0
// with Q_ij = y_i y_j K(x_i, x_j). y is +1 for Fake, -1 for Real.
SmoResult smo_solve(const LabeledMatrix& x, const std::vector<double>& y,
                    double c, KernelFunction kernel, double tolerance = 1e-3,
                    std::uint64_t max_pair_updates = 1000000,
                    std::size_t cache_mb = 512);

}  // namespace spoofdet
