// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/airframe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace icc_cta {

Sap map_codeword_to_sap(const Codeword& cw) {
    Sap sap;
    sap.active = cw.bits;
    return sap;
}

std::vector<uint8_t> unmap_sap(const Sap& sap) {
    return sap.active;
}

void PilotConfig::validate() const {
    if (rho_b <= 0.0)
        throw std::domain_error("PilotConfig: rho_b must be positive");
    if (c_phases < 1)
        throw std::domain_error("PilotConfig: c_phases must be positive");
    if (phi0_index < 0 || phi0_index >= c_phases)
        throw std::domain_error("PilotConfig: phi0_index outside the quantized set");
}

std::vector<double> pilot_phase_sequence(const PilotConfig& cfg, int n_symbols) {
    cfg.validate();
    std::vector<double> phases(static_cast<size_t>(n_symbols));
    const double phi0 = 2.0 * kPi * cfg.phi0_index / cfg.c_phases;
    for (int k = 0; k < n_symbols; ++k)
        phases[static_cast<size_t>(k)] = phi0 + k * cfg.phi_bar;
    return phases;
}

void AttackConfig::validate() const {
    if (rho_a < 0.0)
        throw std::domain_error("AttackConfig: rho_a must be non-negative");
    if (mode == AttackMode::PB_PJ && (pb_fraction <= 0.0 || pb_fraction > 1.0))
        throw std::domain_error("AttackConfig: pb_fraction must lie in (0, 1]");
    if (p_valid < 0.0 || p_valid > 1.0)
        throw std::domain_error("AttackConfig: p_valid must lie in [0, 1]");
}

void GridGeometry::validate() const {
    if (n_fft < 1 || n_t < 1 || l_taps < 1)
        throw std::domain_error("GridGeometry: sizes must be positive");
    if (positions.empty())
        throw std::domain_error("GridGeometry: positions must be non-empty");
    std::vector<int> sorted(positions);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::domain_error("GridGeometry: duplicate subcarrier positions");
    if (sorted.front() < 0 || sorted.back() >= n_fft)
        throw std::domain_error("GridGeometry: positions outside [0, n_fft)");
}

std::vector<int> contiguous_positions(int n_b, int offset) {
    std::vector<int> p(static_cast<size_t>(n_b));
    std::iota(p.begin(), p.end(), offset);
    return p;
}

namespace {

std::vector<uint8_t> attacker_sap(const AttackConfig& cfg, const Sap& sap_b, const IccCode& code,
                                  Rng& rng) {
    const size_t n_b = sap_b.active.size();
    std::vector<uint8_t> sap(n_b, 0);
    switch (cfg.mode) {
    case AttackMode::SC:
        break;
    case AttackMode::WB_PJ:
        std::fill(sap.begin(), sap.end(), 1);
        break;
    case AttackMode::PB_PJ: {
        const auto count =
            static_cast<size_t>(std::ceil(cfg.pb_fraction * static_cast<double>(n_b)));
        std::vector<size_t> idx(n_b);
        std::iota(idx.begin(), idx.end(), 0);
        for (size_t i = 0; i < count && i < n_b; ++i) { // partial Fisher-Yates
            const size_t j = i + rng.uniform_index(n_b - i);
            std::swap(idx[i], idx[j]);
            sap[idx[i]] = 1;
        }
        break;
    }
    case AttackMode::PTS:
    case AttackMode::PTN:
        sap = sap_b.active;
        break;
    case AttackMode::RandomSap:
        if (cfg.p_valid > 0.0 && rng.bernoulli(cfg.p_valid)) {
            const uint64_t span =
                code.size() > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<uint64_t>(code.size());
            sap = code.unrank(BigInt(rng.uniform_index(span))).bits;
        } else {
            for (auto& b : sap)
                b = static_cast<uint8_t>(rng.next_u64() & 1u);
        }
        break;
    }
    return sap;
}

} // namespace

AttackRealization realize_attack(const AttackConfig& cfg, const Sap& sap_b,
                                 const std::vector<double>& bob_phases, const PilotConfig& pilot,
                                 const IccCode& code, Rng& rng) {
    cfg.validate();
    if (bob_phases.size() < kTrainingSymbols)
        throw std::invalid_argument("realize_attack: need phases for all training symbols");

    AttackRealization out;
    out.sap = attacker_sap(cfg, sap_b, code, rng);
    const size_t n_b = out.sap.size();
    out.pilots.assign(n_b, Eigen::Vector3cd::Zero());
    if (cfg.mode == AttackMode::SC || cfg.rho_a == 0.0) {
        std::fill(out.sap.begin(), out.sap.end(), 0);
        return out;
    }

    const double amp = std::sqrt(cfg.rho_a);
    if (cfg.mode == AttackMode::PTS || cfg.mode == AttackMode::PTN) {
        const double flip = cfg.mode == AttackMode::PTN ? kPi : 0.0;
        for (size_t j = 0; j < n_b; ++j) {
            if (!out.sap[j])
                continue;
            for (int k = 0; k < kTrainingSymbols; ++k) {
                // attacker phases are unconstrained; random PIP draws continuous
                double ph = bob_phases[static_cast<size_t>(k)] + flip;
                if (cfg.pip_time == PipTime::random)
                    ph = rng.uniform(0.0, 2.0 * kPi);
                out.pilots[j](k) = amp * std::exp(cxd(0.0, ph));
            }
        }
        return out;
    }

    // Jamming modes: phases per the attacker's own frequency/time strategy.
    const double base = rng.uniform(0.0, 2.0 * kPi);
    std::array<double, kTrainingSymbols> shared_time{};
    for (int k = 0; k < kTrainingSymbols; ++k)
        shared_time[static_cast<size_t>(k)] = rng.uniform(0.0, 2.0 * kPi);
    for (size_t j = 0; j < n_b; ++j) {
        if (!out.sap[j])
            continue;
        const double phi0 =
            cfg.pip_freq == PipFreq::random_per_subcarrier ? rng.uniform(0.0, 2.0 * kPi) : base;
        for (int k = 0; k < kTrainingSymbols; ++k) {
            double ph;
            if (cfg.pip_time == PipTime::same_increment)
                ph = phi0 + k * pilot.phi_bar;
            else if (cfg.pip_freq == PipFreq::same)
                ph = shared_time[static_cast<size_t>(k)];
            else
                ph = rng.uniform(0.0, 2.0 * kPi);
            out.pilots[j](k) = amp * std::exp(cxd(0.0, ph));
        }
    }
    return out;
}

RxGrid synthesize_signal(const GridGeometry& geo, const Sap& sap_b,
                         const std::vector<double>& bob_phases, double rho_b,
                         const AttackRealization& attack, const CirRealization& cir_b,
                         const CirRealization& cir_a) {
    geo.validate();
    const int n_b = geo.n_b();
    if (static_cast<int>(sap_b.active.size()) != n_b ||
        static_cast<int>(attack.sap.size()) != n_b)
        throw std::invalid_argument("synthesize_signal: pattern length != geometry n_b");
    if (cir_b.taps.rows() != geo.n_t || cir_b.taps.cols() != geo.l_taps ||
        cir_a.taps.rows() != geo.n_t || cir_a.taps.cols() != geo.l_taps)
        throw std::invalid_argument("synthesize_signal: CIR dimensions mismatch geometry");

    const Eigen::MatrixXcd f_rows = dft_submatrix(geo.n_fft, geo.l_taps, geo.positions);
    // Per-subcarrier frequency-domain channels across the array: n_b x n_t.
    const Eigen::MatrixXcd fs_b = f_rows * cir_b.taps.transpose();
    const Eigen::MatrixXcd fs_a = f_rows * cir_a.taps.transpose();

    const double amp_b = std::sqrt(rho_b);
    RxGrid grid;
    grid.geometry = geo;
    grid.noise_var = 0.0;
    grid.blocks.assign(static_cast<size_t>(n_b), Eigen::MatrixXcd::Zero(kTrainingSymbols, geo.n_t));
    for (int j = 0; j < n_b; ++j) {
        auto& block = grid.blocks[static_cast<size_t>(j)];
        if (sap_b.active[static_cast<size_t>(j)]) {
            for (int k = 0; k < kTrainingSymbols; ++k) {
                const cxd x = amp_b * std::exp(cxd(0.0, bob_phases[static_cast<size_t>(k)]));
                block.row(k) += x * fs_b.row(j);
            }
        }
        if (attack.sap[static_cast<size_t>(j)]) {
            for (int k = 0; k < kTrainingSymbols; ++k)
                block.row(k) += attack.pilots[static_cast<size_t>(j)](k) * fs_a.row(j);
        }
    }
    return grid;
}

void add_noise(RxGrid& grid, double noise_var, Rng& rng) {
    if (noise_var < 0.0)
        throw std::domain_error("add_noise: variance must be non-negative");
    grid.noise_var = noise_var;
    if (noise_var == 0.0)
        return;
    const double sd = std::sqrt(noise_var);
    for (auto& block : grid.blocks)
        for (Eigen::Index k = 0; k < block.rows(); ++k)
            for (Eigen::Index i = 0; i < block.cols(); ++i)
                block(k, i) += sd * rng.cgaussian();
}

RxGrid synthesize_rx_grid(const GridGeometry& geo, const Sap& sap_b,
                          const std::vector<double>& bob_phases, double rho_b,
                          const AttackRealization& attack, const CirRealization& cir_b,
                          const CirRealization& cir_a, double noise_var, Rng& rng) {
    RxGrid grid = synthesize_signal(geo, sap_b, bob_phases, rho_b, attack, cir_b, cir_a);
    add_noise(grid, noise_var, rng);
    return grid;
}

Eigen::MatrixXcd ls_estimate_pts(const RxGrid& grid, const std::vector<double>& bob_phases,
                                 double rho_b) {
    const int n_b = grid.n_b();
    const auto& geo = grid.geometry;
    if (n_b < geo.l_taps)
        throw NumericalError("ls_estimate_pts: fewer subcarriers than taps");
    const Eigen::MatrixXcd f_rows = dft_submatrix(geo.n_fft, geo.l_taps, geo.positions);
    // Derotate symbol k0 by Bob's pilot and solve the tall LS system per antenna.
    const cxd x0 = std::sqrt(rho_b) * std::exp(cxd(0.0, bob_phases[0]));
    Eigen::MatrixXcd y(n_b, geo.n_t);
    for (int j = 0; j < n_b; ++j)
        y.row(j) = grid.blocks[static_cast<size_t>(j)].row(0) * (std::conj(x0) / std::norm(x0));
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(f_rows);
    if (cod.rank() < geo.l_taps)
        throw NumericalError("ls_estimate_pts: rank-deficient DFT submatrix");
    const Eigen::MatrixXcd taps = cod.solve(y); // l_taps x n_t
    return taps.transpose();                    // n_t x l_taps
}

} // namespace icc_cta
