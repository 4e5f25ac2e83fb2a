// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/binomial.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace icc_cta {

namespace {

class PascalTable {
public:
    const BigInt& get(int n, int k) {
        std::lock_guard<std::mutex> lock(mu_);
        while (static_cast<int>(rows_.size()) <= n) {
            int m = static_cast<int>(rows_.size());
            std::vector<BigInt> row(static_cast<size_t>(m) + 1);
            row[0] = 1;
            row[static_cast<size_t>(m)] = 1;
            for (int j = 1; j < m; ++j)
                row[static_cast<size_t>(j)] =
                    rows_[static_cast<size_t>(m) - 1][static_cast<size_t>(j) - 1] +
                    rows_[static_cast<size_t>(m) - 1][static_cast<size_t>(j)];
            rows_.push_back(std::move(row));
        }
        return rows_[static_cast<size_t>(n)][static_cast<size_t>(k)];
    }

private:
    std::mutex mu_;
    std::vector<std::vector<BigInt>> rows_;
};

const BigInt kZero = 0;

} // namespace

const BigInt& binomial(int n, int k) {
    if (n < 0)
        throw std::domain_error("binomial: n must be non-negative");
    if (k < 0 || k > n)
        return kZero;
    static PascalTable table;
    return table.get(n, k);
}

double log2_binomial(int n, int k) {
    if (n < 0)
        throw std::domain_error("log2_binomial: n must be non-negative");
    if (k < 0 || k > n)
        return -std::numeric_limits<double>::infinity();
    constexpr double ln2 = 0.69314718055994530942;
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / ln2;
}

} // namespace icc_cta
