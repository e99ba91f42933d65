// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spoofdet/error.hpp"

namespace spoofdet {

namespace {
constexpr double kTau = 1e-12;  // floor for non-positive curvature
}

double KernelFunction::operator()(const double* a, const double* b,
                                  std::size_t d) const {
    if (rbf) {
        double sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double diff = a[k] - b[k];
            sq += diff * diff;
        }
        return std::exp(-gamma * sq);
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < d; ++k) dot += a[k] * b[k];
    return dot;
}

KernelCache::KernelCache(const LabeledMatrix& x, KernelFunction kernel,
                         std::size_t budget_bytes)
    : x_(x), kernel_(kernel) {
    const std::size_t n = x.n_rows;
    dense_ = n * n * sizeof(double) <= budget_bytes;
    if (dense_) {
        storage_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            fill_row(i, storage_.data() + i * n);
        return;
    }
    std::size_t slots = std::max<std::size_t>(
        2, budget_bytes / (n * sizeof(double)));
    slots = std::min(slots, n);
    storage_.resize(slots * n);
    slot_of_row_.assign(n, -1);
    row_of_slot_.assign(slots, -1);
    last_used_.assign(slots, 0);
}

void KernelCache::fill_row(std::size_t i, double* out) const {
    const std::size_t n = x_.n_rows;
    const double* xi = x_.row(i);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = kernel_(xi, x_.row(j), x_.n_cols);
}

const double* KernelCache::row(std::size_t i) {
    const std::size_t n = x_.n_rows;
    if (dense_) return storage_.data() + i * n;

    ++tick_;
    if (slot_of_row_[i] >= 0) {
        auto slot = static_cast<std::size_t>(slot_of_row_[i]);
        last_used_[slot] = tick_;
        return storage_.data() + slot * n;
    }
    // evict least recently used slot
    std::size_t victim = 0;
    for (std::size_t s = 1; s < last_used_.size(); ++s)
        if (last_used_[s] < last_used_[victim]) victim = s;
    if (row_of_slot_[victim] >= 0)
        slot_of_row_[static_cast<std::size_t>(row_of_slot_[victim])] = -1;
    row_of_slot_[victim] = static_cast<std::int32_t>(i);
    slot_of_row_[i] = static_cast<std::int32_t>(victim);
    last_used_[victim] = tick_;
    double* out = storage_.data() + victim * n;
    fill_row(i, out);
    return out;
}

SmoResult smo_solve(const LabeledMatrix& x, const std::vector<double>& y,
                    double c, KernelFunction kernel, double tolerance,
                    std::uint64_t max_pair_updates, std::size_t cache_mb) {
    const std::size_t n = x.n_rows;
    if (y.size() != n)
        throw Error(ErrorCode::LengthMismatch, "labels do not match rows");
    if (!(c > 0.0)) throw Error(ErrorCode::BadConfig, "C must be positive");

    bool has_pos = false, has_neg = false;
    for (double yi : y) (yi > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw Error(ErrorCode::SingleClass, "SVM needs both classes");

    KernelCache cache(x, kernel, cache_mb * 1024 * 1024);

    SmoResult result;
    result.alpha.assign(n, 0.0);
    std::vector<double> grad(n, -1.0);  // G_i = (Q a)_i - 1
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = kernel(x.row(i), x.row(i), x.n_cols);

    const double inf = std::numeric_limits<double>::infinity();

    for (;;) {
        // maximal violating pair over I_up / I_low
        double m_up = -inf, m_low = inf;
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const bool in_up = (y[t] > 0 && result.alpha[t] < c) ||
                               (y[t] < 0 && result.alpha[t] > 0);
            const bool in_low = (y[t] < 0 && result.alpha[t] < c) ||
                                (y[t] > 0 && result.alpha[t] > 0);
            const double v = -y[t] * grad[t];
            if (in_up && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (i == n || j == n) {
            // fully saturated working sets: boundary optimum
            result.final_violation = 0.0;
            result.converged = true;
            break;
        }
        result.final_violation = m_up - m_low;
        if (result.final_violation < tolerance) {
            result.converged = true;
            break;
        }
        if (result.pair_updates >= max_pair_updates) {
            result.converged = false;
            break;
        }

        const double* k_i = cache.row(i);
        const double* k_j = cache.row(j);
        const double old_ai = result.alpha[i];
        const double old_aj = result.alpha[j];

        if (y[i] != y[j]) {
            // in raw-kernel terms both branches share ||phi_i - phi_j||^2
            double quad = diag[i] + diag[j] - 2.0 * k_i[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = old_ai - old_aj;
            result.alpha[i] += delta;
            result.alpha[j] += delta;
            if (diff > 0.0 && result.alpha[j] < 0.0) {
                result.alpha[j] = 0.0;
                result.alpha[i] = diff;
            } else if (diff <= 0.0 && result.alpha[i] < 0.0) {
                result.alpha[i] = 0.0;
                result.alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (result.alpha[i] > c) {
                    result.alpha[i] = c;
                    result.alpha[j] = c - diff;
                }
            } else {
                if (result.alpha[j] > c) {
                    result.alpha[j] = c;
                    result.alpha[i] = c + diff;
                }
            }
        } else {
            double quad = diag[i] + diag[j] - 2.0 * k_i[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = old_ai + old_aj;
            result.alpha[i] -= delta;
            result.alpha[j] += delta;
            if (sum > c) {
                if (result.alpha[i] > c) {
                    result.alpha[i] = c;
                    result.alpha[j] = sum - c;
                } else if (result.alpha[j] > c) {
                    result.alpha[j] = c;
                    result.alpha[i] = sum - c;
                }
            } else {
                if (result.alpha[j] < 0.0) {
                    result.alpha[j] = 0.0;
                    result.alpha[i] = sum;
                } else if (result.alpha[i] < 0.0) {
                    result.alpha[i] = 0.0;
                    result.alpha[j] = sum;
                }
            }
        }

        const double d_ai = result.alpha[i] - old_ai;
        const double d_aj = result.alpha[j] - old_aj;
        if (d_ai == 0.0 && d_aj == 0.0) {
            // numerically stalled pair; stop rather than spin
            result.converged = false;
            break;
        }
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * k_i[t] * d_ai + y[j] * k_j[t] * d_aj);
        ++result.pair_updates;
    }

    // bias from free support vectors, else the midpoint of the bounds
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (result.alpha[t] > 0.0 && result.alpha[t] < c) {
            free_sum += -y[t] * grad[t];
            ++free_count;
        }
    }
    if (free_count > 0) {
        result.bias = free_sum / static_cast<double>(free_count);
    } else {
        double m_up = -inf, m_low = inf;
        for (std::size_t t = 0; t < n; ++t) {
            const bool in_up = (y[t] > 0 && result.alpha[t] < c) ||
                               (y[t] < 0 && result.alpha[t] > 0);
            const bool in_low = (y[t] < 0 && result.alpha[t] < c) ||
                                (y[t] > 0 && result.alpha[t] > 0);
            const double v = -y[t] * grad[t];
            if (in_up) m_up = std::max(m_up, v);
            if (in_low) m_low = std::min(m_low, v);
        }
        if (std::isfinite(m_up) && std::isfinite(m_low))
            result.bias = (m_up + m_low) / 2.0;
    }
    return result;
}

}  // namespace spoofdet
