// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_AIRFRAME_HPP
#define ICC_CTA_AIRFRAME_HPP

#include <optional>
#include <vector>

#include "icc_cta/channel.hpp"
#include "icc_cta/common.hpp"
#include "icc_cta/icc_code.hpp"
#include "icc_cta/rng.hpp"

namespace icc_cta {

inline constexpr int kTrainingSymbols = 3;

// Subcarrier activation pattern over the n_b allocated subcarriers.
struct Sap {
    std::vector<uint8_t> active;
    static constexpr int symbol_span = kTrainingSymbols;
};

Sap map_codeword_to_sap(const Codeword& cw);
std::vector<uint8_t> unmap_sap(const Sap& sap); // inverse of the bijection

struct PilotConfig {
    double rho_b = 1.0;   // linear training power
    int c_phases = 16;    // quantization resolution C of the phase set
    int phi0_index = 0;   // index into the quantized set
    double phi_bar = 0.0; // public fixed per-symbol increment

    void validate() const;
};

// Arithmetic phase progression: phi_k = 2 pi phi0_index / C + k * phi_bar.
std::vector<double> pilot_phase_sequence(const PilotConfig& cfg, int n_symbols);

enum class AttackMode {
    SC,        // silence cheating: no transmission
    WB_PJ,     // wide-band jamming: all n_b positions
    PB_PJ,     // partial-band jamming: random ceil(pb_fraction * n_b) subset
    PTS,       // spoofing: replicates Bob's codeword and pilot values
    PTN,       // nulling: phase-inverted replica
    RandomSap, // uniform pattern over all 2^n_b (valid codeword w.p. p_valid)
};

enum class PipFreq { same, random_per_subcarrier };
enum class PipTime { same_increment, random };

struct AttackConfig {
    AttackMode mode = AttackMode::SC;
    double rho_a = 1.0;
    double pb_fraction = 0.5;
    PipFreq pip_freq = PipFreq::same;
    PipTime pip_time = PipTime::same_increment;
    double p_valid = 0.0; // RandomSap: probability of drawing a valid codeword
    double theta2 = 0.0;  // attacker mean AoA (consumed by scenario channel setup)

    void validate() const;
};

// Concrete attacker transmission for one training block: the pattern plus
// per-subcarrier, per-symbol complex pilot values (power included).
struct AttackRealization {
    std::vector<uint8_t> sap;             // length n_b
    std::vector<Eigen::Vector3cd> pilots; // length n_b; zero where inactive
};

AttackRealization realize_attack(const AttackConfig& cfg, const Sap& sap_b,
                                 const std::vector<double>& bob_phases, const PilotConfig& pilot,
                                 const IccCode& code, Rng& rng);

// Frequency positions of the n_b allocated subcarriers inside the N-FFT grid.
struct GridGeometry {
    int n_fft = 64;
    int n_t = 1;
    int l_taps = 1;
    std::vector<int> positions; // length n_b, distinct, in [0, n_fft)

    int n_b() const { return static_cast<int>(positions.size()); }
    void validate() const;
};

std::vector<int> contiguous_positions(int n_b, int offset = 0);

// Post-FFT received grid: one 3 x n_t block per allocated subcarrier.
struct RxGrid {
    std::vector<Eigen::MatrixXcd> blocks; // n_b entries, each 3 x n_t
    double noise_var = 0.0;
    GridGeometry geometry;

    int n_b() const { return static_cast<int>(blocks.size()); }
};

// Deterministic signal part: Bob term + attacker term (no noise).
RxGrid synthesize_signal(const GridGeometry& geo, const Sap& sap_b,
                         const std::vector<double>& bob_phases, double rho_b,
                         const AttackRealization& attack, const CirRealization& cir_b,
                         const CirRealization& cir_a);

// Adds white noise of the given variance to every cell.
void add_noise(RxGrid& grid, double noise_var, Rng& rng);

RxGrid synthesize_rx_grid(const GridGeometry& geo, const Sap& sap_b,
                          const std::vector<double>& bob_phases, double rho_b,
                          const AttackRealization& attack, const CirRealization& cir_b,
                          const CirRealization& cir_a, double noise_var, Rng& rng);

// Conventional LS estimation under a full-band spoofing attack: per antenna,
// pinv(F_L) applied to the phase-derotated symbol-k0 row. Requires every
// allocated subcarrier active.
Eigen::MatrixXcd ls_estimate_pts(const RxGrid& grid, const std::vector<double>& bob_phases,
                                 double rho_b);

} // namespace icc_cta

#endif
