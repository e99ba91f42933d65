// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations used to cross-check the library. These stay
// deliberately naive (quadratic loops, bisection, direct summation) and
// independent of the code paths they verify.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "spoofdet/audio.hpp"
#include "spoofdet/matrix.hpp"
#include "spoofdet/smo.hpp"

namespace spoofdet::oracles {

// pairwise probability that a fake outscores a real, ties at 1/2
inline double mann_whitney_auc(const std::vector<double>& scores,
                               const std::vector<ClipLabel>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != ClipLabel::Fake) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != ClipLabel::Real) continue;
            ++pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

// exhaustive threshold sweep for the FAR/FRR crossing
inline double eer_sweep(const std::vector<double>& scores,
                        const std::vector<ClipLabel>& labels) {
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::size_t n_real = 0, n_fake = 0;
    for (ClipLabel l : labels) (l == ClipLabel::Fake ? n_fake : n_real) += 1;

    double prev_far = 1.0, prev_frr = 0.0;
    for (double t : sorted) {
        std::size_t above = 0, below_eq = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] == ClipLabel::Real && scores[i] > t) ++above;
            if (labels[i] == ClipLabel::Fake && scores[i] <= t) ++below_eq;
        }
        const double far =
            static_cast<double>(above) / static_cast<double>(n_real);
        const double frr =
            static_cast<double>(below_eq) / static_cast<double>(n_fake);
        if (far == frr) return far;
        if (far < frr) {
            const double prev_diff = prev_far - prev_frr;
            const double s = prev_diff / (prev_diff - (far - frr));
            return prev_far + s * (far - prev_far);
        }
        prev_far = far;
        prev_frr = frr;
    }
    return 0.5;
}

// two-sided exact binomial p via Pascal's triangle
inline double mcnemar_exact(int b, int c) {
    const int n = b + c;
    if (n == 0) return 1.0;
    std::vector<double> row = {1.0};
    for (int i = 1; i <= n; ++i) {
        std::vector<double> next(i + 1, 1.0);
        for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    const double denom = std::pow(2.0, n);
    double lo_tail = 0.0, hi_tail = 0.0;
    for (int i = 0; i <= std::min(b, c); ++i) lo_tail += row[i];
    for (int i = std::max(b, c); i <= n; ++i) hi_tail += row[i];
    return std::min(1.0, 2.0 * std::min(lo_tail, hi_tail) / denom);
}

// dual objective 1/2 a^T Q a - e^T a
inline double svm_dual_objective(const LabeledMatrix& x,
                                 const std::vector<double>& y,
                                 const std::vector<double>& alpha,
                                 KernelFunction kernel) {
    const std::size_t n = x.n_rows;
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lin += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            quad += alpha[i] * alpha[j] * y[i] * y[j] *
                    kernel(x.row(i), x.row(j), x.n_cols);
        }
    }
    return 0.5 * quad - lin;
}

// projected-gradient reference solver for the SVM dual: gradient steps
// with exact projection onto {0 <= a <= C, sum a_i y_i = 0} by bisection
inline std::vector<double> brute_force_svm_dual(const LabeledMatrix& x,
                                                const std::vector<double>& y,
                                                double c,
                                                KernelFunction kernel,
                                                int iterations) {
    const std::size_t n = x.n_rows;
    std::vector<double> q(n * n);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            q[i * n + j] = y[i] * y[j] * kernel(x.row(i), x.row(j), x.n_cols);
            if (i == j) trace += q[i * n + j];
        }
    const double step = 1.0 / std::max(trace, 1e-12);

    auto project = [&](std::vector<double>& a) {
        double lo = -1e6, hi = 1e6;
        for (int it = 0; it < 200; ++it) {
            const double mid = (lo + hi) / 2.0;
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += y[i] * std::clamp(a[i] - mid * y[i], 0.0, c);
            if (s > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const double lambda = (lo + hi) / 2.0;
        for (std::size_t i = 0; i < n; ++i)
            a[i] = std::clamp(a[i] - lambda * y[i], 0.0, c);
    };

    std::vector<double> a(n, 0.0), grad(n);
    project(a);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double g = -1.0;
            for (std::size_t j = 0; j < n; ++j) g += q[i * n + j] * a[j];
            grad[i] = g;
        }
        for (std::size_t i = 0; i < n; ++i) a[i] -= step * grad[i];
        project(a);
    }
    return a;
}

// pooled two-sample t statistic, squared
inline double pooled_t_squared(const std::vector<double>& a,
                               const std::vector<double>& b) {
    const auto n1 = static_cast<double>(a.size());
    const auto n2 = static_cast<double>(b.size());
    double m1 = 0.0, m2 = 0.0;
    for (double v : a) m1 += v;
    for (double v : b) m2 += v;
    m1 /= n1;
    m2 /= n2;
    double ss = 0.0;
    for (double v : a) ss += (v - m1) * (v - m1);
    for (double v : b) ss += (v - m2) * (v - m2);
    const double sp2 = ss / (n1 + n2 - 2.0);
    const double t = (m1 - m2) / std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
    return t * t;
}

}  // namespace spoofdet::oracles
