// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/decode.hpp"

#include <algorithm>
#include <cmath>

namespace icc_cta {

ObservedPattern build_observed(const std::vector<SubcarrierState>& states) {
    ObservedPattern obs;
    obs.states = states;
    for (size_t j = 0; j < states.size(); ++j) {
        switch (states[j]) {
        case SubcarrierState::Silent:
            ++obs.n0_det;
            break;
        case SubcarrierState::Dual:
            ++obs.n1_det;
            break;
        case SubcarrierState::Single:
            obs.ambiguous.push_back(static_cast<int>(j));
            break;
        }
    }
    return obs;
}

std::map<int, int> differential_digits(const RxGrid& grid, const std::vector<int>& ambiguous,
                                       int ref, double r_threshold) {
    if (ambiguous.empty())
        throw std::invalid_argument("differential_digits: empty ambiguous set");
    if (std::find(ambiguous.begin(), ambiguous.end(), ref) == ambiguous.end())
        throw std::invalid_argument("differential_digits: ref must be ambiguous");
    const Eigen::VectorXcd y_ref =
        grid.blocks[static_cast<size_t>(ref)].row(0).transpose().normalized();
    std::map<int, int> digits;
    for (int j : ambiguous) {
        if (j == ref)
            continue;
        const Eigen::VectorXcd y_j =
            grid.blocks[static_cast<size_t>(j)].row(0).transpose().normalized();
        const double coherence = std::abs(y_ref.dot(y_j));
        const int f_d = coherence > r_threshold ? 1 : 0;
        digits[j] = f_d ^ 1;
    }
    return digits;
}

SeparationResult resolve_candidates(const ObservedPattern& obs, const std::map<int, int>& digits,
                                    int ref) {
    const size_t n_b = obs.states.size();
    SeparationResult sep;
    sep.ref_index = ref;
    sep.candidate0.assign(n_b, 0);
    sep.candidate1.assign(n_b, 0);
    for (size_t j = 0; j < n_b; ++j) {
        switch (obs.states[j]) {
        case SubcarrierState::Dual:
            sep.candidate0[j] = 1;
            sep.candidate1[j] = 1;
            break;
        case SubcarrierState::Silent:
            break;
        case SubcarrierState::Single: {
            int d;
            if (static_cast<int>(j) == ref)
                d = 0; // self-digit
            else {
                auto it = digits.find(static_cast<int>(j));
                if (it == digits.end())
                    throw std::invalid_argument("resolve_candidates: missing digit");
                d = it->second;
            }
            sep.candidate0[j] = static_cast<uint8_t>(0 ^ d);
            sep.candidate1[j] = static_cast<uint8_t>(1 ^ d);
            break;
        }
        }
    }
    return sep;
}

namespace {

int weight_of(const std::vector<uint8_t>& bits) {
    int w = 0;
    for (uint8_t b : bits)
        w += b;
    return w;
}

bool any_single_source(const std::vector<uint8_t>& bits, const ObservedPattern& obs) {
    for (size_t j = 0; j < bits.size(); ++j)
        if (bits[j] && obs.states[j] != SubcarrierState::Dual)
            return true;
    return false;
}

} // namespace

IdentificationOutcome identify_legitimate(const SeparationResult& sep, const IccCode& code,
                                          const ObservedPattern& obs, Rng& tie_rng) {
    IdentificationOutcome out;
    const bool pass0 = weight_of(sep.candidate0) == code.weight();
    const bool pass1 = weight_of(sep.candidate1) == code.weight();
    if (!pass0 && !pass1) {
        out.kind = IdentificationKind::Failed;
        return out;
    }
    if (pass0 && pass1 && sep.candidate0 != sep.candidate1) {
        out.kind = IdentificationKind::CoinFlip;
        const bool pick0 = tie_rng.bernoulli(0.5);
        out.bob_codeword = pick0 ? sep.candidate0 : sep.candidate1;
        out.other_pattern = pick0 ? sep.candidate1 : sep.candidate0;
        return out;
    }
    out.bob_codeword = pass0 ? sep.candidate0 : sep.candidate1;
    out.other_pattern = pass0 ? sep.candidate1 : sep.candidate0;
    // If the complementary candidate never transmits alone anywhere, the trial
    // carried no detectable second source.
    out.kind = !any_single_source(out.other_pattern, obs) && weight_of(out.other_pattern) == 0
                   ? IdentificationKind::NoAttackDetected
                   : IdentificationKind::UniqueBob;
    return out;
}

DecodeResult decode_grid(const RxGrid& grid, const IccCode& code, const ErdThresholds& thr,
                         double r_threshold, Rng& tie_rng) {
    DecodeResult res;
    res.observed = build_observed(sse_classify(grid, thr));
    if (res.observed.ambiguous.empty()) {
        res.separation.ref_index = -1;
        res.separation.candidate0.assign(res.observed.states.size(), 0);
        res.separation.candidate1.assign(res.observed.states.size(), 0);
        for (size_t j = 0; j < res.observed.states.size(); ++j)
            if (res.observed.states[j] == SubcarrierState::Dual) {
                res.separation.candidate0[j] = 1;
                res.separation.candidate1[j] = 1;
            }
    } else {
        const int ref = res.observed.ambiguous.front(); // deterministic choice
        const auto digits = differential_digits(grid, res.observed.ambiguous, ref, r_threshold);
        res.separation = resolve_candidates(res.observed, digits, ref);
    }
    res.outcome = identify_legitimate(res.separation, code, res.observed, tie_rng);
    return res;
}

SepIepRates measure_sep_iep(const DecodeTrialConfig& cfg, const ErdThresholds& thr,
                            uint64_t n_trials, uint64_t seed) {
    const double noise_var = std::pow(10.0, -cfg.snr_db / 10.0) * cfg.pilot.rho_b;
    OneRingModel mb = cfg.channel_b;
    OneRingModel ma = cfg.channel_a;
    mb.n_t = cfg.geometry.n_t;
    mb.l_taps = cfg.geometry.l_taps;
    ma.n_t = cfg.geometry.n_t;
    ma.l_taps = cfg.geometry.l_taps;
    const Eigen::MatrixXcd factor_b = sqrt_factor(eig_hermitian(one_ring_covariance(mb).entries));
    const Eigen::MatrixXcd factor_a = sqrt_factor(eig_hermitian(one_ring_covariance(ma).entries));

    std::vector<uint8_t> sep_err(n_trials, 0), iep_err(n_trials, 0);
    parallel_trials(n_trials, cfg.workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(seed, t);
        PilotConfig pilot = cfg.pilot;
        const uint64_t phase_span = std::min<uint64_t>(
            static_cast<uint64_t>(pilot.c_phases),
            cfg.code.size() > BigInt(UINT64_MAX) ? UINT64_MAX
                                                 : static_cast<uint64_t>(cfg.code.size()));
        pilot.phi0_index = static_cast<int>(rng.uniform_index(phase_span));
        const Codeword cw = cfg.code.unrank(BigInt(pilot.phi0_index));
        const Sap sap_b = map_codeword_to_sap(cw);
        const auto phases = pilot_phase_sequence(pilot, kTrainingSymbols);
        const auto attack = realize_attack(cfg.attack, sap_b, phases, pilot, cfg.code, rng);
        const CirRealization cir_b = draw_cir(factor_b, cfg.geometry.l_taps, rng);
        const CirRealization cir_a = draw_cir(factor_a, cfg.geometry.l_taps, rng);
        const RxGrid grid = synthesize_rx_grid(cfg.geometry, sap_b, phases, pilot.rho_b, attack,
                                               cir_b, cir_a, noise_var, rng);
        const DecodeResult res = decode_grid(grid, cfg.code, thr, cfg.r_threshold, rng);

        // Separation: the two candidates must reproduce both ground-truth SAPs.
        const std::vector<uint8_t>& truth_b = sap_b.active;
        const std::vector<uint8_t>& truth_a = attack.sap;
        const bool match_direct =
            res.separation.candidate0 == truth_b && res.separation.candidate1 == truth_a;
        const bool match_swapped =
            res.separation.candidate1 == truth_b && res.separation.candidate0 == truth_a;
        sep_err[t] = match_direct || match_swapped ? 0 : 1;
        iep_err[t] = res.outcome.bob_codeword == truth_b ? 0 : 1;
    });

    SepIepRates rates;
    rates.trials = n_trials;
    uint64_t se = 0, ie = 0;
    for (uint64_t t = 0; t < n_trials; ++t) {
        se += sep_err[t];
        ie += iep_err[t];
    }
    rates.sep_rate = static_cast<double>(se) / static_cast<double>(n_trials);
    rates.iep_rate = static_cast<double>(ie) / static_cast<double>(n_trials);
    return rates;
}

} // namespace icc_cta
