// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/rng.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace icc_cta {

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t Rng::uniform_index(uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("uniform_index: n must be positive");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

void parallel_trials(uint64_t n_trials, int workers, const std::function<void(uint64_t)>& fn) {
    if (n_trials == 0)
        return;
    workers = resolve_workers(workers);
    if (workers <= 1 || n_trials == 1) {
        for (uint64_t t = 0; t < n_trials; ++t)
            fn(t);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                uint64_t t = next.fetch_add(1);
                if (t >= n_trials || failed.load())
                    return;
                try {
                    fn(t);
                } catch (...) {
                    failed.store(true);
                    throw; // std::terminate; simulation kernels must not throw per-trial
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
}

int resolve_workers(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("ICC_CTA_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace icc_cta
