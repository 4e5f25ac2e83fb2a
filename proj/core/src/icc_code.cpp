// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/icc_code.hpp"

#include <algorithm>
#include <bit>

namespace icc_cta {

int Codeword::weight() const {
    int w = 0;
    for (uint8_t b : bits)
        w += b;
    return w;
}

int weight_for(int n_b, int s) {
    if (n_b < 1 || s < 1)
        throw std::domain_error("weight_for: n_b and s must be positive");
    if (s > n_b)
        throw std::domain_error("weight_for: order s cannot exceed code length n_b");
    if ((n_b + s) % 2 != 0)
        throw std::domain_error("weight_for: n_b + s must be even");
    return (n_b + s) / 2;
}

BigInt code_size(int n_b, int w) {
    if (n_b < 0 || w < 0 || w > n_b)
        throw std::domain_error("code_size: requires 0 <= w <= n_b");
    return binomial(n_b, w);
}

double code_rate(int n_b, int s) {
    const int w = weight_for(n_b, s);
    return log2_binomial(n_b, w) / n_b;
}

double iep_closed_form(int n_b, int s) {
    return static_cast<double>(iep_closed_form_exact(n_b, s));
}

BigRational iep_closed_form_exact(int n_b, int s) {
    const int w = weight_for(n_b, s);
    const BigInt c = code_size(n_b, w);
    BigInt den = BigInt(1) << (n_b + 1);
    return BigRational(c - 1, den);
}

BigRational iep_bruteforce(int n_b, int s) {
    const int w = weight_for(n_b, s);
    if (n_b > 20)
        throw std::domain_error("iep_bruteforce: enumeration bound is n_b <= 20");
    // Any fixed codeword serves as the reference; take all-ones-prefix.
    const uint64_t reference = (uint64_t(1) << w) - 1;
    uint64_t count = 0;
    const uint64_t total = uint64_t(1) << n_b;
    for (uint64_t pattern = 0; pattern < total; ++pattern) {
        if (std::popcount(pattern) == w && pattern != reference)
            ++count;
    }
    BigInt den = BigInt(1) << (n_b + 1);
    return BigRational(BigInt(count), den);
}

IccCode::IccCode(int n_b, int s) : n_b_(n_b), s_(s), w_(weight_for(n_b, s)) {
    size_ = code_size(n_b_, w_);
}

Codeword IccCode::unrank(const BigInt& index) const {
    if (index < 0 || index >= size_)
        throw std::out_of_range("IccCode::unrank: index outside [0, size)");
    Codeword cw;
    cw.bits.assign(static_cast<size_t>(n_b_), 0);
    cw.index = index;
    BigInt rem = index;
    int ones_left = w_;
    for (int pos = 0; pos < n_b_; ++pos) {
        const int slots = n_b_ - pos - 1;
        // words starting with 0 here keep all ones for the remaining slots
        const BigInt& with_zero = binomial(slots, ones_left);
        if (rem < with_zero) {
            cw.bits[static_cast<size_t>(pos)] = 0;
        } else {
            cw.bits[static_cast<size_t>(pos)] = 1;
            rem -= with_zero;
            --ones_left;
        }
    }
    if (ones_left != 0)
        throw NumericalError("IccCode::unrank: internal weight mismatch");
    return cw;
}

BigInt IccCode::rank(const std::vector<uint8_t>& bits) const {
    if (static_cast<int>(bits.size()) != n_b_)
        throw std::invalid_argument("IccCode::rank: wrong word length");
    BigInt r = 0;
    int ones_left = w_;
    for (int pos = 0; pos < n_b_; ++pos) {
        const int slots = n_b_ - pos - 1;
        if (bits[static_cast<size_t>(pos)]) {
            r += binomial(slots, ones_left);
            --ones_left;
        }
    }
    if (ones_left != 0)
        throw std::invalid_argument("IccCode::rank: word weight != w");
    return r;
}

bool IccCode::is_codeword(const std::vector<uint8_t>& bits) const {
    if (static_cast<int>(bits.size()) != n_b_)
        return false;
    int w = 0;
    for (uint8_t b : bits)
        w += b;
    return w == w_;
}

namespace {

int overlap(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    int o = 0;
    for (size_t i = 0; i < a.size(); ++i)
        o += a[i] & b[i];
    return o;
}

} // namespace

int IccCode::min_pairwise_overlap(uint64_t sample_limit, Rng* rng) const {
    if (size_ == 1)
        return w_; // self-overlap of the single codeword
    if (size_ * size_ <= sample_limit) {
        const uint64_t c = static_cast<uint64_t>(size_);
        std::vector<std::vector<uint8_t>> words;
        words.reserve(c);
        for (uint64_t i = 0; i < c; ++i)
            words.push_back(unrank(BigInt(i)).bits);
        int best = w_;
        for (uint64_t i = 0; i < c; ++i)
            for (uint64_t j = i + 1; j < c; ++j)
                best = std::min(best, overlap(words[i], words[j]));
        return best;
    }
    if (!rng)
        throw std::invalid_argument("min_pairwise_overlap: sampling mode needs an RNG");
    // Random-pair sampling; result is an upper bound on the true minimum.
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(size_)) + 1;
    const unsigned words = bits / 64 + 1;
    auto random_index = [&]() {
        BigInt x = 0;
        for (unsigned k = 0; k < words; ++k) {
            x <<= 64;
            x += rng->next_u64();
        }
        return x % size_;
    };
    int best = w_;
    for (uint64_t t = 0; t < sample_limit; ++t) {
        BigInt i = random_index();
        BigInt j = random_index();
        if (i == j)
            continue;
        best = std::min(best, overlap(unrank(i).bits, unrank(j).bits));
    }
    return best;
}

} // namespace icc_cta
