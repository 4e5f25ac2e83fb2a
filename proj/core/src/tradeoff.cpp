// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/tradeoff.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace icc_cta {

int s_star(int n_fft, int l_taps) {
    if (l_taps < 1 || n_fft < 1)
        throw std::domain_error("s_star: sizes must be positive");
    if (n_fft % l_taps != 0)
        throw std::domain_error("s_star: l_taps must divide n_fft");
    return (l_taps - 1) * (n_fft / l_taps) + 1;
}

std::vector<int> equally_spaced_positions(int n_fft, int l_taps, int k_offset) {
    if (n_fft % l_taps != 0)
        throw std::domain_error("equally_spaced_positions: l_taps must divide n_fft");
    const int step = n_fft / l_taps;
    if (k_offset < 0 || k_offset >= step)
        throw std::domain_error("equally_spaced_positions: offset outside [0, N/L)");
    std::vector<int> pos(static_cast<size_t>(l_taps));
    for (int t = 0; t < l_taps; ++t)
        pos[static_cast<size_t>(t)] = k_offset + t * step;
    return pos;
}

bool cs_satisfied(const std::vector<int>& overlap_positions, int l_taps, int span) {
    if (static_cast<int>(overlap_positions.size()) < l_taps)
        return false;
    std::vector<int> sorted(overlap_positions);
    std::sort(sorted.begin(), sorted.end());
    int run = 1, best = 1;
    for (size_t i = 1; i < sorted.size(); ++i) {
        run = sorted[i] == sorted[i - 1] + 1 ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best >= span;
}

BigRational stability_closed_exact(int n_b, int w, int span) {
    if (n_b < 1 || span < 1 || span > n_b)
        throw std::domain_error("stability_closed: requires 1 <= span <= n_b");
    if (w < 0 || w > n_b)
        throw std::domain_error("stability_closed: requires 0 <= w <= n_b");
    const int zeros = n_b - w;
    const BigInt num = binomial(n_b - span, zeros);
    const BigInt den = binomial(n_b, zeros);
    BigRational p(num, den);
    return p * p;
}

double stability_closed(int n_b, int w, int span) {
    return static_cast<double>(stability_closed_exact(n_b, w, span));
}

namespace {

uint64_t embed_mask(uint32_t word, const std::vector<int>& embedding) {
    uint64_t mask = 0;
    for (size_t j = 0; j < embedding.size(); ++j)
        if (word & (uint32_t(1) << j))
            mask |= uint64_t(1) << embedding[j];
    return mask;
}

bool has_run(uint64_t mask, int span) {
    for (int i = 1; i < span && mask; ++i)
        mask &= mask << 1;
    return mask != 0;
}

} // namespace

BigRational stability_bruteforce(int n_b, int w, int n_fft, int l_taps,
                                 const std::vector<int>& embedding) {
    if (n_b > 14)
        throw std::domain_error("stability_bruteforce: enumeration bound is n_b <= 14");
    if (w < 0 || w > n_b)
        throw std::domain_error("stability_bruteforce: requires 0 <= w <= n_b");
    if (n_fft > 64)
        throw std::domain_error("stability_bruteforce: n_fft <= 64 required");
    const int span = s_star(n_fft, l_taps);
    std::vector<int> emb = embedding;
    if (emb.empty()) {
        emb.resize(static_cast<size_t>(n_b));
        for (int j = 0; j < n_b; ++j)
            emb[static_cast<size_t>(j)] = j;
    }
    if (static_cast<int>(emb.size()) != n_b)
        throw std::invalid_argument("stability_bruteforce: embedding length != n_b");
    for (int p : emb)
        if (p < 0 || p >= n_fft)
            throw std::invalid_argument("stability_bruteforce: embedding outside the grid");

    // All weight-w words, pre-embedded into grid masks.
    std::vector<uint64_t> words;
    if (w == 0) {
        words.push_back(0);
    } else {
        uint32_t v = (uint32_t(1) << w) - 1;
        const uint32_t limit = uint32_t(1) << n_b;
        while (v < limit) {
            words.push_back(embed_mask(v, emb));
            const uint32_t t = v | (v - 1); // Gosper's hack
            v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
        }
    }

    const size_t c = words.size();
    uint64_t kappa = 0;
    for (size_t i = 0; i < c; ++i) {
        const uint64_t wi = words[i];
        if (has_run(wi, span) && std::popcount(wi) >= l_taps)
            ++kappa; // diagonal pair (i, i)
        for (size_t j = i + 1; j < c; ++j) {
            const uint64_t o = wi & words[j];
            if (std::popcount(o) >= l_taps && has_run(o, span))
                kappa += 2; // ordered pairs (i, j) and (j, i)
        }
    }
    const BigInt c_big(c);
    return BigRational(BigInt(kappa), c_big * c_big);
}

OptimalCodeParams optimal_code_params(int span, int n_b) {
    if (span < 1 || n_b < span)
        throw std::domain_error("optimal_code_params: requires 1 <= s* <= n_b");
    if ((n_b + 1) % (span + 1) != 0)
        throw ConfigError("optimal_code_params: (s*+1) must divide (n_b+1)");
    OptimalCodeParams p;
    p.w = span * ((n_b + 1) / (span + 1));
    p.s = ((span - 1) * n_b + 2 * span) / (span + 1);
    if (((span - 1) * n_b + 2 * span) % (span + 1) != 0 || p.s < 1)
        throw ConfigError("optimal_code_params: order s is not a positive integer");
    p.rate = code_rate(n_b, p.s);
    return p;
}

int suggest_feasible_n_b(int span, int lo, int hi) {
    for (int n = std::max(lo, span); n <= hi; ++n)
        if ((n + 1) % (span + 1) == 0)
            return n;
    return -1;
}

double rate_lower_bound(int n_b, int n_fft, int l_taps) {
    (void)s_star(n_fft, l_taps); // validates divisibility
    const double ln = static_cast<double>(l_taps - 1) * n_fft;
    const double eta = (ln + 2.0 * l_taps) / (ln + l_taps) * (static_cast<double>(n_b) / (n_b + 1));
    return std::log2(eta) / eta;
}

int worst_case_min_run(int n_b, int w) {
    if (w < 0 || w > n_b)
        throw std::domain_error("worst_case_min_run: requires 0 <= w <= n_b");
    const int zeros = n_b - w;
    if (zeros == 0)
        return w;
    // Equally spaced zeros split the ones into zeros+1 runs differing by at
    // most one; the shortest is the floor.
    return w / (zeros + 1);
}

} // namespace icc_cta
