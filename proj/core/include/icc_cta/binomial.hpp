// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_BINOMIAL_HPP
#define ICC_CTA_BINOMIAL_HPP

#include "icc_cta/common.hpp"

namespace icc_cta {

// Exact binomial coefficient with the usual edge conventions:
// binom(n, 0) = 1 (including binom(0, 0)), out-of-range k -> 0.
// Backed by a lazily grown Pascal triangle; thread-safe.
const BigInt& binomial(int n, int k);

// log2 of binomial(n, k) via lgamma; relative error <= 1e-12 for n <= 10^4.
double log2_binomial(int n, int k);

} // namespace icc_cta

#endif
