// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_RNG_HPP
#define ICC_CTA_RNG_HPP

#include <cstdint>
#include <functional>
#include <random>

#include "icc_cta/common.hpp"

namespace icc_cta {

// splitmix64; used to derive independent per-trial seeds from (seed, stream id).
uint64_t mix_seed(uint64_t seed, uint64_t stream);

// Deterministic RNG wrapper. All samplers are implemented here (not via
// std distributions) so that a fixed seed yields identical streams on any
// standard-conforming platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    static Rng for_trial(uint64_t seed, uint64_t trial) { return Rng(mix_seed(seed, trial)); }

    uint64_t next_u64() { return gen_(); }

    // uniform in (0, 1]
    double uniform01() {
        return static_cast<double>((gen_() >> 11) + 1) * (1.0 / 9007199254740992.0);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // unbiased integer in [0, n)
    uint64_t uniform_index(uint64_t n);

    // standard real Gaussian (Box-Muller, one value per draw)
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // circularly-symmetric complex Gaussian, E|z|^2 = 1
    cxd cgaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-std::log(u1));
        return cxd(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
    }

    bool bernoulli(double p) { return uniform01() <= p; }

private:
    std::mt19937_64 gen_;
};

// Runs fn(trial) for trial in [0, n_trials) on `workers` threads. Each call
// receives a distinct trial index; determinism is the caller's duty (derive
// per-trial RNGs from the trial index, write to per-trial slots).
void parallel_trials(uint64_t n_trials, int workers, const std::function<void(uint64_t)>& fn);

// Worker count resolution: explicit > ICC_CTA_WORKERS env > hardware.
int resolve_workers(int requested);

} // namespace icc_cta

#endif
