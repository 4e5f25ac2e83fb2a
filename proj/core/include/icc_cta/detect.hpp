// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_DETECT_HPP
#define ICC_CTA_DETECT_HPP

#include <string>
#include <utility>
#include <vector>

#include "icc_cta/airframe.hpp"
#include "icc_cta/channel.hpp"
#include "icc_cta/common.hpp"
#include "icc_cta/rng.hpp"

namespace icc_cta {

enum class SubcarrierState { Silent, Single, Dual };

struct ErdThresholds {
    double gamma_presence = 0.0; // lambda1/lambda3 presence test
    double gamma_dual = 0.0;     // lambda2/lambda3 two-source test
    double target_pf = 0.0;
    int n_t = 0;
};

// Ordered-eigenvalue ratios (lambda1/lambda3, lambda2/lambda3) of the
// normalized 3x3 sample covariance (1/sigma^2) Y Y^H.
std::pair<double, double> eigenratio_statistics(const Eigen::MatrixXcd& block, double noise_var);

struct CalibrationConfig {
    int n_t = 256;
    double target_pf = 1e-3;
    double snr_db = 20.0;     // single-source condition for the dual threshold
    uint64_t n_trials = 0;    // 0 -> ceil(10 / target_pf)
    OneRingModel channel;     // one-ring prior for the single-source draws
    double phi_bar = kPi / 2; // Bob's time-domain increment
    int workers = 0;
};

// Monte Carlo quantile calibration: gamma_presence from the noise-only null,
// gamma_dual from the single-source condition at the configured SNR.
ErdThresholds calibrate_thresholds(const CalibrationConfig& cfg, uint64_t seed);

// Fraction of noise-only blocks with t1 > thr.gamma_presence.
double validate_pf(const ErdThresholds& thr, uint64_t n_blocks, uint64_t seed, int workers = 0);

std::vector<SubcarrierState> sse_classify(const RxGrid& grid, const ErdThresholds& thr);

// Small key-value cache so repeated runs skip recalibration.
// Key: (n_t, target_pf, snr_db, seed). Returns false on miss.
bool cache_lookup(const std::string& path, const CalibrationConfig& cfg, uint64_t seed,
                  ErdThresholds* out);
void cache_store(const std::string& path, const CalibrationConfig& cfg, uint64_t seed,
                 const ErdThresholds& thr);

} // namespace icc_cta

#endif
