// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_ICC_CODE_HPP
#define ICC_CTA_ICC_CODE_HPP

#include <cstdint>
#include <vector>

#include "icc_cta/binomial.hpp"
#include "icc_cta/common.hpp"
#include "icc_cta/rng.hpp"

namespace icc_cta {

// A length-n_b binary word of the codebook together with its lexicographic rank.
struct Codeword {
    std::vector<uint8_t> bits;
    BigInt index;

    int weight() const;
};

// The independence-checking codebook of order s: all weight-w words of
// length n_b with w = (n_b + s)/2. Codewords are never materialized; access
// is by combinadic rank/unrank in lexicographic order ('0' < '1').
class IccCode {
public:
    IccCode(int n_b, int s);

    int n_b() const { return n_b_; }
    int order() const { return s_; }
    int weight() const { return w_; }
    const BigInt& size() const { return size_; }

    Codeword unrank(const BigInt& index) const;
    BigInt rank(const std::vector<uint8_t>& bits) const;

    // Membership reduces to a popcount check: every weight-w word is a codeword.
    bool is_codeword(const std::vector<uint8_t>& bits) const;

    // Minimum pairwise AND-weight over the codebook. Exhaustive when
    // size^2 <= sample_limit, else over random pairs (result is then an
    // upper bound, >= s). A single-codeword book returns its self-overlap w.
    int min_pairwise_overlap(uint64_t sample_limit, Rng* rng = nullptr) const;

private:
    int n_b_;
    int s_;
    int w_;
    BigInt size_;
};

// w = (n_b + s)/2. Throws on odd n_b + s or s outside [1, n_b].
int weight_for(int n_b, int s);

// binomial(n_b, w), exact.
BigInt code_size(int n_b, int w);

// log2(binomial(n_b, w))/n_b with w = weight_for(n_b, s).
double code_rate(int n_b, int s);

// Identification error probability of the order-s codebook,
// (C - 1) / 2^(n_b + 1) with C = code_size(n_b, weight_for(n_b, s)).
double iep_closed_form(int n_b, int s);
BigRational iep_closed_form_exact(int n_b, int s);

// Exhaustive oracle: enumerates all 2^n_b attacker patterns, counts the
// weight-w words distinct from a fixed reference codeword, and returns
// count / 2^(n_b + 1) (the 1/2 is the identification tie-break).
BigRational iep_bruteforce(int n_b, int s);

} // namespace icc_cta

#endif
