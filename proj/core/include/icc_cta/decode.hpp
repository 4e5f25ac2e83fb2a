// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_DECODE_HPP
#define ICC_CTA_DECODE_HPP

#include <map>
#include <optional>
#include <vector>

#include "icc_cta/detect.hpp"
#include "icc_cta/icc_code.hpp"

namespace icc_cta {

struct ObservedPattern {
    std::vector<SubcarrierState> states;
    std::vector<int> ambiguous; // P_d: positions classified Single
    int n1_det = 0;             // Dual count
    int n0_det = 0;             // Silent count
};

ObservedPattern build_observed(const std::vector<SubcarrierState>& states);

// Differential digit d_{ref,j} = f_d(|<y_ref, y_j>|) xor 1 on unit-normalized
// symbol-k0 antenna vectors: 0 for same source, 1 for different sources.
std::map<int, int> differential_digits(const RxGrid& grid, const std::vector<int>& ambiguous,
                                       int ref, double r_threshold);

struct SeparationResult {
    std::vector<uint8_t> candidate0; // completion under hypothesis d_ref = 0
    std::vector<uint8_t> candidate1; // completion under hypothesis d_ref = 1
    int ref_index = -1;
};

SeparationResult resolve_candidates(const ObservedPattern& obs, const std::map<int, int>& digits,
                                    int ref);

enum class IdentificationKind {
    UniqueBob,        // exactly one candidate satisfies the weight constraint
    CoinFlip,         // both candidates valid: fair tie-break
    NoAttackDetected, // unique, and the losing candidate carries no source
    Failed            // neither candidate valid (upstream digit error)
};

struct IdentificationOutcome {
    IdentificationKind kind = IdentificationKind::Failed;
    std::vector<uint8_t> bob_codeword;
    std::vector<uint8_t> other_pattern; // the complementary candidate
};

IdentificationOutcome identify_legitimate(const SeparationResult& sep, const IccCode& code,
                                          const ObservedPattern& obs, Rng& tie_rng);

// Full receive-side pipeline on one grid.
struct DecodeResult {
    ObservedPattern observed;
    SeparationResult separation;
    IdentificationOutcome outcome;
};

DecodeResult decode_grid(const RxGrid& grid, const IccCode& code, const ErdThresholds& thr,
                         double r_threshold, Rng& tie_rng);

// Monte Carlo SEP/IEP measurement over a synthesized link.
struct DecodeTrialConfig {
    IccCode code;
    GridGeometry geometry;
    PilotConfig pilot;
    AttackConfig attack;
    OneRingModel channel_b;
    OneRingModel channel_a;
    double snr_db = 20.0;
    double r_threshold = 0.5;
    int workers = 0;
};

struct SepIepRates {
    double sep_rate = 0.0;
    double iep_rate = 0.0;
    uint64_t trials = 0;
};

SepIepRates measure_sep_iep(const DecodeTrialConfig& cfg, const ErdThresholds& thr,
                            uint64_t n_trials, uint64_t seed);

} // namespace icc_cta

#endif
