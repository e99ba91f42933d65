// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spoofdet {

std::size_t next_pow2(std::size_t n);

// In-place radix-2 Cooley-Tukey; data.size() must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse = false);

// Magnitudes of the one-sided spectrum (n/2 + 1 bins) of a real signal
// zero-padded to fft_size, which must be a power of two >= signal length.
std::vector<double> real_fft_magnitudes(const std::vector<double>& signal,
                                        std::size_t fft_size);

}  // namespace spoofdet
