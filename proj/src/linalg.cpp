// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/linalg.hpp"

#include <cmath>

namespace spoofdet {

bool cholesky_lower(std::vector<double>& a, std::size_t d) {
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
        if (!(diag > 0.0)) return false;
        const double root = std::sqrt(diag);
        a[j * d + j] = root;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
            a[i * d + j] = v / root;
        }
    }
    return true;
}

void forward_solve(const std::vector<double>& l, std::size_t d,
                   const double* b, double* y) {
    for (std::size_t i = 0; i < d; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l[i * d + k] * y[k];
        y[i] = v / l[i * d + i];
    }
}

double cholesky_log_det(const std::vector<double>& l, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) acc += std::log(l[i * d + i]);
    return 2.0 * acc;
}

}  // namespace spoofdet
