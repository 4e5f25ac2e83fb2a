// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/detect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

namespace icc_cta {

std::pair<double, double> eigenratio_statistics(const Eigen::MatrixXcd& block, double noise_var) {
    if (block.rows() != kTrainingSymbols)
        throw std::invalid_argument("eigenratio_statistics: block must have 3 symbol rows");
    if (block.cols() < kTrainingSymbols)
        throw std::invalid_argument("eigenratio_statistics: requires n_t >= 3");
    if (noise_var <= 0.0)
        throw std::domain_error("eigenratio_statistics: noise_var must be positive");
    if (block.squaredNorm() == 0.0)
        throw NumericalError("eigenratio_statistics: degenerate all-zero block");
    Eigen::Matrix3cd r = (block * block.adjoint()) / noise_var;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(r);
    const auto& ev = solver.eigenvalues(); // ascending
    const double l3 = std::max(ev(0), 1e-300);
    return {ev(2) / l3, ev(1) / l3};
}

namespace {

double upper_quantile(std::vector<double>& samples, double tail_prob) {
    std::sort(samples.begin(), samples.end());
    const auto n = samples.size();
    auto idx = static_cast<size_t>(std::ceil((1.0 - tail_prob) * static_cast<double>(n)));
    idx = std::min(idx, n - 1);
    return samples[idx];
}

} // namespace

ErdThresholds calibrate_thresholds(const CalibrationConfig& cfg, uint64_t seed) {
    if (cfg.n_t < kTrainingSymbols)
        throw std::domain_error("calibrate_thresholds: n_t must be >= 3");
    if (cfg.target_pf <= 0.0 || cfg.target_pf >= 1.0)
        throw std::domain_error("calibrate_thresholds: target_pf must lie in (0, 1)");
    const uint64_t n_trials =
        cfg.n_trials > 0 ? cfg.n_trials : static_cast<uint64_t>(std::ceil(10.0 / cfg.target_pf));
    if (static_cast<double>(n_trials) < 10.0 / cfg.target_pf)
        throw std::domain_error("calibrate_thresholds: insufficient trials for the quantile");

    // Null: noise-only blocks. The ratios are scale-invariant, so sigma = 1.
    std::vector<double> t1_null(n_trials);
    parallel_trials(n_trials, cfg.workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(mix_seed(seed, 0xe5d0), t);
        Eigen::MatrixXcd y(kTrainingSymbols, cfg.n_t);
        for (int k = 0; k < kTrainingSymbols; ++k)
            for (int i = 0; i < cfg.n_t; ++i)
                y(k, i) = rng.cgaussian();
        t1_null[t] = eigenratio_statistics(y, 1.0).first;
    });

    // Alternative for the dual threshold: one source drawn from the one-ring
    // prior at the scenario SNR, Bob-style pilot progression.
    OneRingModel model = cfg.channel;
    model.n_t = cfg.n_t;
    const double rho = std::pow(10.0, cfg.snr_db / 10.0);
    std::vector<double> t2_single(n_trials);
    // Per-path factor of the normalized-PDP covariance at the sector center.
    // The ratio statistics are insensitive to theta; one prior draw per trial
    // uses theta sampled uniformly from the sector.
    std::mutex cov_mu;
    std::vector<std::pair<double, Eigen::MatrixXcd>> factor_cache;
    auto factor_for = [&](double theta) {
        const double key = std::round(theta * 512.0) / 512.0;
        {
            std::lock_guard<std::mutex> lock(cov_mu);
            for (auto& kv : factor_cache)
                if (kv.first == key)
                    return kv.second;
        }
        OneRingModel m = model;
        m.theta = key;
        Eigen::MatrixXcd f = sqrt_factor(eig_hermitian(one_ring_covariance(m).entries));
        std::lock_guard<std::mutex> lock(cov_mu);
        factor_cache.emplace_back(key, f);
        return f;
    };
    // Pre-seed a small set of angles so worker threads mostly hit the cache.
    for (int g = -4; g <= 4; ++g)
        factor_for(kSectorHalfWidth * g / 4.0);

    parallel_trials(n_trials, cfg.workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(mix_seed(seed, 0xa17e), t);
        const double theta =
            kSectorHalfWidth * (static_cast<double>(rng.uniform_index(9)) - 4.0) / 4.0;
        const Eigen::MatrixXcd factor = factor_for(theta);
        CirRealization cir = draw_cir(factor, model.l_taps, rng);
        // Frequency response at one subcarrier (row 0 of the DFT): sum of taps.
        Eigen::VectorXcd g = cir.taps.rowwise().sum();
        const double phi0 = rng.uniform(0.0, 2.0 * kPi);
        Eigen::MatrixXcd y(kTrainingSymbols, cfg.n_t);
        for (int k = 0; k < kTrainingSymbols; ++k) {
            const cxd x = std::sqrt(rho) * std::exp(cxd(0.0, phi0 + k * cfg.phi_bar));
            for (int i = 0; i < cfg.n_t; ++i)
                y(k, i) = x * g(i) + rng.cgaussian();
        }
        t2_single[t] = eigenratio_statistics(y, 1.0).second;
    });

    ErdThresholds thr;
    thr.n_t = cfg.n_t;
    thr.target_pf = cfg.target_pf;
    thr.gamma_presence = upper_quantile(t1_null, cfg.target_pf);
    thr.gamma_dual = upper_quantile(t2_single, cfg.target_pf);
    return thr;
}

double validate_pf(const ErdThresholds& thr, uint64_t n_blocks, uint64_t seed, int workers) {
    std::vector<uint8_t> alarms(n_blocks, 0);
    parallel_trials(n_blocks, workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(mix_seed(seed, 0xf0f0), t);
        Eigen::MatrixXcd y(kTrainingSymbols, thr.n_t);
        for (int k = 0; k < kTrainingSymbols; ++k)
            for (int i = 0; i < thr.n_t; ++i)
                y(k, i) = rng.cgaussian();
        alarms[t] = eigenratio_statistics(y, 1.0).first > thr.gamma_presence ? 1 : 0;
    });
    uint64_t count = 0;
    for (uint8_t a : alarms)
        count += a;
    return static_cast<double>(count) / static_cast<double>(n_blocks);
}

std::vector<SubcarrierState> sse_classify(const RxGrid& grid, const ErdThresholds& thr) {
    if (thr.n_t != grid.geometry.n_t)
        throw std::invalid_argument("sse_classify: thresholds calibrated for a different n_t");
    std::vector<SubcarrierState> states(static_cast<size_t>(grid.n_b()));
    for (int j = 0; j < grid.n_b(); ++j) {
        const auto [t1, t2] =
            eigenratio_statistics(grid.blocks[static_cast<size_t>(j)], grid.noise_var);
        if (t1 <= thr.gamma_presence)
            states[static_cast<size_t>(j)] = SubcarrierState::Silent;
        else if (t2 <= thr.gamma_dual)
            states[static_cast<size_t>(j)] = SubcarrierState::Single;
        else
            states[static_cast<size_t>(j)] = SubcarrierState::Dual;
    }
    return states;
}

namespace {

std::string cache_key(const CalibrationConfig& cfg, uint64_t seed) {
    std::ostringstream os;
    os << cfg.n_t << ',' << cfg.target_pf << ',' << cfg.snr_db << ',' << seed;
    return os.str();
}

} // namespace

bool cache_lookup(const std::string& path, const CalibrationConfig& cfg, uint64_t seed,
                  ErdThresholds* out) {
    std::ifstream in(path);
    if (!in)
        return false;
    const std::string key = cache_key(cfg, seed);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string k;
        double gp, gd;
        if (ls >> k >> gp >> gd && k == key) {
            out->n_t = cfg.n_t;
            out->target_pf = cfg.target_pf;
            out->gamma_presence = gp;
            out->gamma_dual = gd;
            return true;
        }
    }
    return false;
}

void cache_store(const std::string& path, const CalibrationConfig& cfg, uint64_t seed,
                 const ErdThresholds& thr) {
    std::ofstream out(path, std::ios::app);
    if (!out)
        throw std::runtime_error("cache_store: cannot open " + path);
    out << cache_key(cfg, seed) << ' ' << thr.gamma_presence << ' ' << thr.gamma_dual << '\n';
}

} // namespace icc_cta
