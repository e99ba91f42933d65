// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace spoofdet {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation,
// absolute accuracy well under 1e-10 for the parameter ranges used here.
double incomplete_beta(double a, double b, double x);

// Upper tail of the F(d1, d2) distribution at f.
double f_distribution_sf(double f, double d1, double d2);

// Upper tail of the chi-square(1) distribution.
double chi2_1_sf(double x);

// Inverse standard normal CDF (probit).
double inverse_normal_cdf(double p);

// P[X <= k] for X ~ Binomial(n, 1/2).
double binomial_half_cdf(int k, int n);

// FNV-1a, used for schema and config fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& text);

}  // namespace spoofdet
