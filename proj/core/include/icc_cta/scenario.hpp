// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_SCENARIO_HPP
#define ICC_CTA_SCENARIO_HPP

#include <map>
#include <string>
#include <vector>

#include "icc_cta/csv.hpp"
#include "icc_cta/decode.hpp"
#include "icc_cta/estimate.hpp"
#include "icc_cta/tradeoff.hpp"

namespace icc_cta {

// Flat configuration covering every scenario; see README for the key grammar.
struct ScenarioConfig {
    std::string scenario = "erd_roc";

    // scenario.*
    uint64_t trials = 0; // 0 -> scenario default
    uint64_t seed = 1;
    int workers = 0;

    // grid.*
    int n_t = 256;
    int n_fft = 64;
    int n_b = 7;
    int l_taps = 2;
    std::vector<int> n_t_list = {32, 64, 128, 256};

    // channel.*
    double delta_rad = kPi / 18;
    double d_spacing = 0.5;
    int k_support = 5;

    // pilot.*
    int c_phases = 16;
    double phi_bar = kPi / 2;
    double rho_b = 1.0;

    // link.*
    double snr_db = 20.0;
    std::vector<double> snr_list = {10.0};

    // attack.*
    std::string attack_mode = "random_sap";
    double rho_a = 1.0;
    double pb_fraction = 0.5;
    std::string pip_freq = "same";
    std::string pip_time = "random";
    double p_valid = 0.0;

    // detect.*
    double target_pf = 1e-3;
    double r_threshold = 0.5;
    std::string cache_path;

    // estimate.*
    double metric_tol = 1e-2;
    int s_overlap = 8;

    // nmse_cdf.*
    int runs = 20;
    int averages = 200;

    // tradeoff.* / surface.* / rate.*
    int k_dpd = 10;       // K for P_I/K columns of tradeoff_curve
    int k_surface = 20;   // K for iep_surface
    int k_max = 15;       // largest k index in iep_surface / rate_curve

    void validate() const;
    AttackConfig attack() const;
    OneRingModel channel_model(double theta) const;
};

std::vector<std::string> scenario_names();
ScenarioConfig default_config(const std::string& scenario);

// "section.key = value" lines; '#' comments; `[section]` headers prefix keys.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_overrides(ScenarioConfig& cfg, const std::map<std::string, std::string>& kv);

ResultTable run_scenario(const ScenarioConfig& cfg);

// Calibrated detection thresholds for the configured link, via the cache file
// when cfg.cache_path is set.
ErdThresholds scenario_thresholds(const ScenarioConfig& cfg);

// One point of the PTS estimation experiment (criterion-10 style):
// normalized NMSE (linear) for the conventional LS baseline, the two-user
// LMMSE, and the statistical-covariance genie, plus the per-user LMMSE
// errors for the large-array symmetry check.
struct NmsePoint {
    double nmse_ls = 0.0;
    double nmse_lmmse = 0.0;
    double nmse_mmse = 0.0;
    double eps_b_sq = 0.0;
    double eps_a_sq = 0.0;
};

NmsePoint nmse_experiment(const ScenarioConfig& cfg, int n_t, double snr_db, uint64_t trials,
                          uint64_t seed);

// One cell of the angular-identification grid: empirical mean/SE of delta_f
// and the large-array limit.
struct DeltaFCell {
    double mean = 0.0;
    double se = 0.0;
    double limit = 0.0;
};

DeltaFCell delta_f_cell(const ScenarioConfig& cfg, double theta1, double theta2, uint64_t trials,
                        uint64_t seed);

// End-to-end identification under DPD mean AoAs: full decode pipeline with
// angular resolution of code-domain confusions.
struct IdentificationResult {
    uint64_t trials = 0;
    uint64_t errors = 0;
    uint64_t confusions = 0;
    uint64_t undecidable = 0;
    double error_rate = 0.0;
    double deltaf_tol = 0.0;
};

IdentificationResult identification_experiment(const ScenarioConfig& cfg, uint64_t trials,
                                               uint64_t seed);

} // namespace icc_cta

#endif
