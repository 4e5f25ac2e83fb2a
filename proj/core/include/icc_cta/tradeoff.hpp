// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_TRADEOFF_HPP
#define ICC_CTA_TRADEOFF_HPP

#include <vector>

#include "icc_cta/common.hpp"
#include "icc_cta/icc_code.hpp"

namespace icc_cta {

// Span of the equally spaced overlap pattern: (L-1) N / L + 1. Requires L | N.
int s_star(int n_fft, int l_taps);

// {k, k + N/L, ..., k + (L-1) N/L}; the resulting tap-side Gram has all
// eigenvalues equal.
std::vector<int> equally_spaced_positions(int n_fft, int l_taps, int k_offset);

// Condition of stable recovery for an overlap set embedded in the FFT grid:
// at least L positions and a run of >= span consecutive grid positions.
bool cs_satisfied(const std::vector<int>& overlap_positions, int l_taps, int span);

// Closed-form stability probability (exact in the n_b = s* regime):
// { binom(n_b - span, n_b - w) / binom(n_b, n_b - w) }^2.
double stability_closed(int n_b, int w, int span);
BigRational stability_closed_exact(int n_b, int w, int span);

// kappa / C^2 over all ordered codeword pairs of the all-weight-w book,
// with CS evaluated on the pair overlap embedded at `embedding` (code
// position j -> grid position embedding[j]; default contiguous from 0).
BigRational stability_bruteforce(int n_b, int w, int n_fft, int l_taps,
                                 const std::vector<int>& embedding = {});

struct OptimalCodeParams {
    int w = 0;
    int s = 0;
    double rate = 0.0;
};

// Maximum-rate parameters keeping every codeword's worst-case run structure
// stable: w = s*(n_b+1)/(s*+1), s = ((s*-1) n_b + 2 s*)/(s*+1).
// Throws ConfigError when the divisibility assumptions fail.
OptimalCodeParams optimal_code_params(int span, int n_b);

// Nearest n_b >= lo with (span+1) | (n_b+1); -1 if none below hi.
int suggest_feasible_n_b(int span, int lo, int hi);

// log2(eta)/eta with eta = ((L-1)N + 2L)/((L-1)N + L) * n_b/(n_b + 1).
double rate_lower_bound(int n_b, int n_fft, int l_taps);

// Worst-case run check behind Proposition's s*-OS condition: place the
// n_b - w zero digits (nearly) equally spaced and return the minimum run of
// ones between adjacent zeros.
int worst_case_min_run(int n_b, int w);

} // namespace icc_cta

#endif
