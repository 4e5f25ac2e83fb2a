// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>

namespace icc_cta {

namespace {

constexpr char kScenarios[][16] = {"erd_roc",     "delta_f_grid", "nmse_cdf", "tradeoff_curve",
                                   "iep_surface", "rate_curve",   "nmse_vs_snr"};

AttackMode parse_mode(const std::string& s) {
    if (s == "sc")
        return AttackMode::SC;
    if (s == "wb_pj")
        return AttackMode::WB_PJ;
    if (s == "pb_pj")
        return AttackMode::PB_PJ;
    if (s == "pts")
        return AttackMode::PTS;
    if (s == "ptn")
        return AttackMode::PTN;
    if (s == "random_sap")
        return AttackMode::RandomSap;
    throw ConfigError("unknown attack.mode '" + s + "'");
}

template <typename T>
T parse_num(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    T v{};
    char trailing = 0;
    if (!(is >> v) || is >> trailing)
        throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
    return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ','))
        out.push_back(parse_num<T>(key, item));
    if (out.empty())
        throw ConfigError("empty list for key '" + key + "'");
    return out;
}

} // namespace

void ScenarioConfig::validate() const {
    const auto* end = kScenarios + sizeof(kScenarios) / sizeof(kScenarios[0]);
    if (std::find_if(kScenarios, end, [&](const char* s) { return scenario == s; }) == end)
        throw ConfigError("unknown scenario '" + scenario + "'");
    if (n_t < 3 || n_fft < 1 || n_b < 1 || l_taps < 1)
        throw ConfigError("grid sizes must be positive (n_t >= 3)");
    if (n_b > n_fft)
        throw ConfigError("n_b cannot exceed n_fft");
    if (!(delta_rad > 0.0) || delta_rad >= kPi / 2)
        throw ConfigError("channel.delta_rad must lie in (0, pi/2)");
    if (d_spacing < 0.0 || d_spacing > 0.5)
        throw ConfigError("channel.d_spacing must lie in [0, 1/2]");
    if (k_support < 1)
        throw ConfigError("channel.k_support must be positive");
    if (c_phases < 1 || rho_b <= 0.0)
        throw ConfigError("pilot configuration invalid");
    if (rho_a < 0.0)
        throw ConfigError("attack.rho_a must be non-negative");
    if (target_pf <= 0.0 || target_pf >= 1.0)
        throw ConfigError("detect.target_pf must lie in (0, 1)");
    if (r_threshold <= 0.0 || r_threshold >= 1.0)
        throw ConfigError("detect.r_threshold must lie in (0, 1)");
    if (metric_tol <= 0.0 || metric_tol >= 1.0)
        throw ConfigError("estimate.metric_tol must lie in (0, 1)");
    if (s_overlap < 1 || s_overlap > n_fft)
        throw ConfigError("estimate.s_overlap must lie in [1, n_fft]");
    if (runs < 1 || averages < 1)
        throw ConfigError("nmse_cdf.runs and nmse_cdf.averages must be positive");
    if (k_dpd < 1 || k_surface < 1 || k_max < 2)
        throw ConfigError("k parameters must be positive (k_max >= 2)");
    parse_mode(attack_mode);
    if (pip_freq != "same" && pip_freq != "random")
        throw ConfigError("attack.pip_freq must be same|random");
    if (pip_time != "same_increment" && pip_time != "random")
        throw ConfigError("attack.pip_time must be same_increment|random");
    if (p_valid < 0.0 || p_valid > 1.0)
        throw ConfigError("attack.p_valid must lie in [0, 1]");
}

AttackConfig ScenarioConfig::attack() const {
    AttackConfig a;
    a.mode = parse_mode(attack_mode);
    a.rho_a = rho_a;
    a.pb_fraction = pb_fraction;
    a.pip_freq = pip_freq == "same" ? PipFreq::same : PipFreq::random_per_subcarrier;
    a.pip_time = pip_time == "same_increment" ? PipTime::same_increment : PipTime::random;
    a.p_valid = p_valid;
    return a;
}

OneRingModel ScenarioConfig::channel_model(double theta) const {
    OneRingModel m;
    m.theta = theta;
    m.delta = delta_rad;
    m.d_spacing = d_spacing;
    m.n_t = n_t;
    m.l_taps = l_taps;
    return m;
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> names;
    for (const auto& s : kScenarios)
        names.emplace_back(s);
    return names;
}

ScenarioConfig default_config(const std::string& scenario) {
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    if (scenario == "erd_roc") {
        cfg.trials = 20000;
    } else if (scenario == "delta_f_grid") {
        cfg.trials = 200;
        cfg.n_t = 100;
        cfg.l_taps = 4;
        cfg.snr_db = 30.0;
    } else if (scenario == "nmse_cdf") {
        cfg.trials = 1;
        cfg.n_t = 8;
        cfg.n_fft = 132;
        cfg.n_b = 128;
        cfg.l_taps = 6;
        cfg.snr_db = 10.0;
    } else if (scenario == "tradeoff_curve") {
        cfg.trials = 1;
        cfg.n_fft = 16;
        cfg.l_taps = 4;
        cfg.k_dpd = 10;
    } else if (scenario == "iep_surface") {
        cfg.trials = 0; // analytic columns only by default
        cfg.k_surface = 20;
    } else if (scenario == "rate_curve") {
        cfg.trials = 1;
        cfg.k_max = 25;
    } else if (scenario == "nmse_vs_snr") {
        cfg.trials = 400;
        cfg.l_taps = 4;
        cfg.n_b = 16;
        cfg.s_overlap = 8;
        cfg.snr_list = {10.0};
    } else {
        throw ConfigError("unknown scenario '" + scenario + "'");
    }
    return cfg;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("malformed config line: '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty())
            key = section + "." + key;
        kv[key] = value;
    }
    return kv;
}

void apply_overrides(ScenarioConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "scenario.name")
            cfg.scenario = value;
        else if (key == "scenario.trials")
            cfg.trials = parse_num<uint64_t>(key, value);
        else if (key == "scenario.seed")
            cfg.seed = parse_num<uint64_t>(key, value);
        else if (key == "scenario.workers")
            cfg.workers = parse_num<int>(key, value);
        else if (key == "grid.n_t")
            cfg.n_t = parse_num<int>(key, value);
        else if (key == "grid.n_fft")
            cfg.n_fft = parse_num<int>(key, value);
        else if (key == "grid.n_b")
            cfg.n_b = parse_num<int>(key, value);
        else if (key == "grid.l_taps")
            cfg.l_taps = parse_num<int>(key, value);
        else if (key == "grid.n_t_list")
            cfg.n_t_list = parse_list<int>(key, value);
        else if (key == "channel.delta_rad")
            cfg.delta_rad = parse_num<double>(key, value);
        else if (key == "channel.d_spacing")
            cfg.d_spacing = parse_num<double>(key, value);
        else if (key == "channel.k_support")
            cfg.k_support = parse_num<int>(key, value);
        else if (key == "pilot.c_phases")
            cfg.c_phases = parse_num<int>(key, value);
        else if (key == "pilot.phi_bar")
            cfg.phi_bar = parse_num<double>(key, value);
        else if (key == "pilot.rho_b")
            cfg.rho_b = parse_num<double>(key, value);
        else if (key == "link.snr_db")
            cfg.snr_db = parse_num<double>(key, value);
        else if (key == "link.snr_list")
            cfg.snr_list = parse_list<double>(key, value);
        else if (key == "attack.mode")
            cfg.attack_mode = value;
        else if (key == "attack.rho_a")
            cfg.rho_a = parse_num<double>(key, value);
        else if (key == "attack.pb_fraction")
            cfg.pb_fraction = parse_num<double>(key, value);
        else if (key == "attack.pip_freq")
            cfg.pip_freq = value;
        else if (key == "attack.pip_time")
            cfg.pip_time = value;
        else if (key == "attack.p_valid")
            cfg.p_valid = parse_num<double>(key, value);
        else if (key == "detect.target_pf")
            cfg.target_pf = parse_num<double>(key, value);
        else if (key == "detect.r_threshold")
            cfg.r_threshold = parse_num<double>(key, value);
        else if (key == "detect.cache")
            cfg.cache_path = value;
        else if (key == "estimate.metric_tol")
            cfg.metric_tol = parse_num<double>(key, value);
        else if (key == "estimate.s_overlap")
            cfg.s_overlap = parse_num<int>(key, value);
        else if (key == "nmse_cdf.runs")
            cfg.runs = parse_num<int>(key, value);
        else if (key == "nmse_cdf.averages")
            cfg.averages = parse_num<int>(key, value);
        else if (key == "tradeoff.k_dpd")
            cfg.k_dpd = parse_num<int>(key, value);
        else if (key == "surface.k_dpd")
            cfg.k_surface = parse_num<int>(key, value);
        else if (key == "surface.k_max")
            cfg.k_max = parse_num<int>(key, value);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    cfg.validate();
}

// ---------------------------------------------------------------------------
// Covariance cache

namespace {

struct CovBundle {
    Eigen::MatrixXcd aggregate;
    HermEig agg_eig;          // standard rank tolerance (whitening, draws)
    HermEig agg_eig_metric;   // metric tolerance (decision kernels)
    Eigen::MatrixXcd factor_agg; // sqrt of aggregate (unit per-path power)
    Eigen::MatrixXcd factor_pp;  // sqrt of per-path (normalized PDP)
};

const CovBundle& covariance_bundle(const OneRingModel& model, double metric_tol) {
    static std::mutex mu;
    static std::deque<std::pair<std::string, CovBundle>> cache; // stable references
    std::ostringstream key;
    key << model.theta << '|' << model.delta << '|' << model.d_spacing << '|' << model.n_t << '|'
        << model.l_taps << '|' << metric_tol;
    {
        std::lock_guard<std::mutex> lock(mu);
        for (auto& kv : cache)
            if (kv.first == key.str())
                return kv.second;
    }
    CovBundle b;
    const CovarianceMatrix pp = one_ring_covariance(model);
    b.aggregate = pp.to_aggregate(model.l_taps).entries;
    b.agg_eig = eig_hermitian(b.aggregate);
    b.agg_eig_metric = eig_hermitian(b.aggregate, metric_tol);
    b.factor_agg = sqrt_factor(b.agg_eig);
    b.factor_pp = b.factor_agg / std::sqrt(static_cast<double>(model.l_taps));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace_back(key.str(), std::move(b));
    return cache.back().second;
}

Eigen::Vector2cd bob_pilot_pair(double rho_b, double phi0, double phi_bar) {
    Eigen::Vector2cd x;
    x(0) = std::sqrt(rho_b) * std::exp(cxd(0.0, phi0));
    x(1) = std::sqrt(rho_b) * std::exp(cxd(0.0, phi0 + phi_bar));
    return x;
}

// Attacker pilot pair with its own per-symbol phases, redrawn until the 2x2
// pilot matrix is well conditioned (the confusing-but-distinct-values case).
Eigen::Vector2cd confusing_pilot_pair(const Eigen::Vector2cd& x1, double rho_a, Rng& rng) {
    for (int tries = 0; tries < 64; ++tries) {
        Eigen::Vector2cd x2;
        x2(0) = std::sqrt(rho_a) * std::exp(cxd(0.0, rng.uniform(0.0, 2.0 * kPi)));
        x2(1) = std::sqrt(rho_a) * std::exp(cxd(0.0, rng.uniform(0.0, 2.0 * kPi)));
        Eigen::Matrix2cd x;
        x.col(0) = x1;
        x.col(1) = x2;
        if (std::abs(x.determinant()) / (x1.norm() * x2.norm()) > 0.25)
            return x2;
    }
    throw NumericalError("confusing_pilot_pair: conditioning redraw failed");
}

BigInt random_bigint_below(Rng& rng, const BigInt& bound) {
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    const unsigned words = bits / 64 + 1;
    BigInt x = 0;
    for (unsigned k = 0; k < words; ++k) {
        x <<= 64;
        x += rng.next_u64();
    }
    return x % bound;
}

double to_db(double v) {
    return 10.0 * std::log10(std::max(v, 1e-300));
}

} // namespace

ErdThresholds scenario_thresholds(const ScenarioConfig& cfg) {
    CalibrationConfig cal;
    cal.n_t = cfg.n_t;
    cal.target_pf = cfg.target_pf;
    cal.snr_db = cfg.snr_db;
    cal.n_trials = std::max<uint64_t>(static_cast<uint64_t>(std::ceil(10.0 / cfg.target_pf)),
                                      20000);
    cal.channel = cfg.channel_model(0.0);
    cal.phi_bar = cfg.phi_bar;
    cal.workers = cfg.workers;
    ErdThresholds thr;
    if (!cfg.cache_path.empty() && cache_lookup(cfg.cache_path, cal, cfg.seed, &thr))
        return thr;
    thr = calibrate_thresholds(cal, cfg.seed);
    if (!cfg.cache_path.empty())
        cache_store(cfg.cache_path, cal, cfg.seed, thr);
    return thr;
}

// ---------------------------------------------------------------------------
// Estimation experiments

NmsePoint nmse_experiment(const ScenarioConfig& cfg, int n_t, double snr_db, uint64_t trials,
                          uint64_t seed) {
    if (cfg.n_fft % cfg.s_overlap != 0)
        throw ConfigError("nmse_experiment: s_overlap must divide n_fft");
    // Mirror-symmetric mean AoAs: the two covariances share a spectrum, so
    // the finite-array error statistics of the two users match.
    OneRingModel mb = cfg.channel_model(-kPi / 12.0);
    OneRingModel ma = cfg.channel_model(kPi / 12.0);
    mb.n_t = n_t;
    ma.n_t = n_t;
    const CovBundle& bb = covariance_bundle(mb, cfg.metric_tol);
    const CovBundle& ba = covariance_bundle(ma, cfg.metric_tol);

    std::vector<int> overlap(static_cast<size_t>(cfg.s_overlap));
    for (int q = 0; q < cfg.s_overlap; ++q)
        overlap[static_cast<size_t>(q)] = q * (cfg.n_fft / cfg.s_overlap);
    const Eigen::MatrixXcd f_ls = dft_submatrix(cfg.n_fft, cfg.l_taps, overlap);
    const int s = cfg.s_overlap;
    const double t_scalar = cfg.l_taps; // aggregate-drawn Kronecker channels
    const double noise_var_kron = cfg.rho_b * cfg.l_taps * std::pow(10.0, -snr_db / 10.0);
    const double noise_var_phys = cfg.rho_b * std::pow(10.0, -snr_db / 10.0);

    GridGeometry geo;
    geo.n_fft = cfg.n_fft;
    geo.n_t = n_t;
    geo.l_taps = cfg.l_taps;
    geo.positions = contiguous_positions(cfg.n_b);
    Sap full_sap;
    full_sap.active.assign(static_cast<size_t>(cfg.n_b), 1);
    AttackConfig pts;
    pts.mode = AttackMode::PTS;
    pts.rho_a = cfg.rho_a;
    pts.pip_time = PipTime::random; // own phase values on Bob's pattern
    const IccCode dummy_code(cfg.n_b, cfg.n_b % 2 == 0 ? 2 : 1);

    std::vector<double> e_ls(trials), e_lm(trials), e_mm(trials), e_b(trials), e_a(trials);
    parallel_trials(trials, cfg.workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(seed, t);
        const double phi0 =
            2.0 * kPi * rng.uniform_index(static_cast<uint64_t>(cfg.c_phases)) / cfg.c_phases;
        const Eigen::Vector2cd x1 = bob_pilot_pair(cfg.rho_b, phi0, cfg.phi_bar);
        const Eigen::Vector2cd x2 = confusing_pilot_pair(x1, cfg.rho_a, rng);

        // Two-user overlap observation in the Kronecker convention.
        const CirRealization kron_b = draw_cir(bb.factor_agg, cfg.l_taps, rng);
        const CirRealization kron_a = draw_cir(ba.factor_agg, cfg.l_taps, rng);
        Eigen::RowVectorXcd hb(static_cast<Eigen::Index>(n_t) * s);
        Eigen::RowVectorXcd ha(static_cast<Eigen::Index>(n_t) * s);
        const Eigen::MatrixXcd fs_b = kron_b.taps * f_ls.transpose(); // n_t x s
        const Eigen::MatrixXcd fs_a = kron_a.taps * f_ls.transpose();
        for (int i = 0; i < n_t; ++i)
            for (int q = 0; q < s; ++q) {
                hb(static_cast<Eigen::Index>(i) * s + q) = fs_b(i, q);
                ha(static_cast<Eigen::Index>(i) * s + q) = fs_a(i, q);
            }
        OverlapObservation obs;
        obs.n_t = n_t;
        obs.overlap = overlap;
        obs.f_ls = f_ls;
        obs.x_l.col(0) = x1;
        obs.x_l.col(1) = x2;
        obs.y_l.resize(2, hb.size());
        const double sd = std::sqrt(noise_var_kron);
        for (int k = 0; k < 2; ++k)
            for (Eigen::Index c = 0; c < hb.size(); ++c)
                obs.y_l(k, c) = x1(k) * hb(c) + x2(k) * ha(c) + sd * rng.cgaussian();

        const FsEstimatePair lm = lmmse_estimate(obs, t_scalar, noise_var_kron);
        const FsEstimatePair mm = mmse_estimate(obs, t_scalar, noise_var_kron);
        e_lm[t] = nmse(lm.h_b_hat, hb);
        e_mm[t] = nmse(mm.h_b_hat, hb);
        e_b[t] = (lm.h_b_hat - hb).squaredNorm() / static_cast<double>(hb.size());
        e_a[t] = (lm.h_a_hat - ha).squaredNorm() / static_cast<double>(ha.size());

        // Conventional LS under the spoofed full band (physical convention).
        const std::vector<double> phases = {phi0, phi0 + cfg.phi_bar, phi0 + 2 * cfg.phi_bar};
        const CirRealization cir_b = draw_cir(bb.factor_pp, cfg.l_taps, rng);
        const CirRealization cir_a = draw_cir(ba.factor_pp, cfg.l_taps, rng);
        const auto attack = realize_attack(pts, full_sap, phases, PilotConfig{cfg.rho_b,
                                           cfg.c_phases, 0, cfg.phi_bar}, dummy_code, rng);
        const RxGrid grid = synthesize_rx_grid(geo, full_sap, phases, cfg.rho_b, attack, cir_b,
                                               cir_a, noise_var_phys, rng);
        const Eigen::MatrixXcd taps_hat = ls_estimate_pts(grid, phases, cfg.rho_b);
        e_ls[t] = (taps_hat - cir_b.taps).squaredNorm() / cir_b.taps.squaredNorm();
    });

    NmsePoint p;
    for (uint64_t t = 0; t < trials; ++t) {
        p.nmse_ls += e_ls[t];
        p.nmse_lmmse += e_lm[t];
        p.nmse_mmse += e_mm[t];
        p.eps_b_sq += e_b[t];
        p.eps_a_sq += e_a[t];
    }
    const double inv = 1.0 / static_cast<double>(trials);
    p.nmse_ls *= inv;
    p.nmse_lmmse *= inv;
    p.nmse_mmse *= inv;
    p.eps_b_sq *= inv;
    p.eps_a_sq *= inv;
    return p;
}

DeltaFCell delta_f_cell(const ScenarioConfig& cfg, double theta1, double theta2, uint64_t trials,
                        uint64_t seed) {
    if (cfg.n_fft % cfg.s_overlap != 0)
        throw ConfigError("delta_f_cell: s_overlap must divide n_fft");
    OneRingModel m1 = cfg.channel_model(theta1);
    OneRingModel m2 = cfg.channel_model(theta2);
    const CovBundle& b1 = covariance_bundle(m1, cfg.metric_tol);
    const CovBundle& b2 = covariance_bundle(m2, cfg.metric_tol);

    std::vector<int> overlap(static_cast<size_t>(cfg.s_overlap));
    for (int q = 0; q < cfg.s_overlap; ++q)
        overlap[static_cast<size_t>(q)] = q * (cfg.n_fft / cfg.s_overlap);
    const Eigen::MatrixXcd f_ls = dft_submatrix(cfg.n_fft, cfg.l_taps, overlap);
    DecisionKernel kernel = make_decision_kernel(b1.agg_eig_metric, f_ls);

    const int s = cfg.s_overlap;
    const double t_scalar = cfg.l_taps;
    const double noise_var = cfg.rho_b * cfg.l_taps * std::pow(10.0, -cfg.snr_db / 10.0);

    std::vector<double> dfs(trials);
    parallel_trials(trials, cfg.workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(seed, t);
        const double phi0 =
            2.0 * kPi * rng.uniform_index(static_cast<uint64_t>(cfg.c_phases)) / cfg.c_phases;
        const Eigen::Vector2cd x1 = bob_pilot_pair(cfg.rho_b, phi0, cfg.phi_bar);
        const Eigen::Vector2cd x2 = confusing_pilot_pair(x1, cfg.rho_a, rng);
        const CirRealization kb = draw_cir(b1.factor_agg, cfg.l_taps, rng);
        const CirRealization ka = draw_cir(b2.factor_agg, cfg.l_taps, rng);
        const Eigen::MatrixXcd fs_b = kb.taps * f_ls.transpose();
        const Eigen::MatrixXcd fs_a = ka.taps * f_ls.transpose();
        OverlapObservation obs;
        obs.n_t = cfg.n_t;
        obs.overlap = overlap;
        obs.f_ls = f_ls;
        obs.x_l.col(0) = x1;
        obs.x_l.col(1) = x2;
        obs.y_l.resize(2, static_cast<Eigen::Index>(cfg.n_t) * s);
        const double sd = std::sqrt(noise_var);
        for (int i = 0; i < cfg.n_t; ++i)
            for (int q = 0; q < s; ++q) {
                const Eigen::Index c = static_cast<Eigen::Index>(i) * s + q;
                for (int k = 0; k < 2; ++k)
                    obs.y_l(k, c) = x1(k) * fs_b(i, q) + x2(k) * fs_a(i, q) + sd * rng.cgaussian();
            }
        const FsEstimatePair pair = lmmse_estimate(obs, t_scalar, noise_var);
        dfs[t] = decision_metric(pair.h_b_hat, kernel) - decision_metric(pair.h_a_hat, kernel);
    });

    DeltaFCell cell;
    for (double v : dfs)
        cell.mean += v;
    cell.mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : dfs)
        var += (v - cell.mean) * (v - cell.mean);
    cell.se = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1) /
                                     static_cast<double>(trials))
                         : 0.0;
    cell.limit = delta_f_limit(kernel, b2.aggregate);
    return cell;
}

// ---------------------------------------------------------------------------
// End-to-end identification with angular resolution

namespace {

// 0.1 x median off-diagonal |delta_f| at the experiment's operating point.
double calibrate_deltaf_tol(const ScenarioConfig& cfg, const std::vector<double>& grid,
                            uint64_t seed) {
    ScenarioConfig probe = cfg;
    probe.s_overlap = cfg.l_taps; // representative small overlap
    while (cfg.n_fft % probe.s_overlap != 0)
        ++probe.s_overlap;
    std::vector<double> mags;
    const double th1 = grid[grid.size() / 2];
    for (size_t g = 0; g < grid.size(); ++g) {
        if (grid[g] == th1)
            continue;
        const DeltaFCell cell = delta_f_cell(probe, th1, grid[g], 16, mix_seed(seed, 0xca1 + g));
        mags.push_back(std::abs(cell.mean));
    }
    std::sort(mags.begin(), mags.end());
    const double med = mags[mags.size() / 2];
    // Grid cells use the Kronecker convention; the decode path is physical
    // (1/L per-path power), which scales every quadratic form by 1/L.
    return 0.1 * med / cfg.l_taps;
}

} // namespace

IdentificationResult identification_experiment(const ScenarioConfig& cfg, uint64_t trials,
                                               uint64_t seed) {
    const IccCode book(cfg.n_b, cfg.n_b % 2 ? 1 : 2); // minimal parity-consistent order
    const std::vector<double> grid = dpd_grid(cfg.k_support);
    const ErdThresholds thr = scenario_thresholds(cfg);
    const double noise_var = cfg.rho_b * std::pow(10.0, -cfg.snr_db / 10.0);

    GridGeometry geo;
    geo.n_fft = cfg.n_fft;
    geo.n_t = cfg.n_t;
    geo.l_taps = cfg.l_taps;
    geo.positions = contiguous_positions(cfg.n_b);

    PilotConfig pilot;
    pilot.rho_b = cfg.rho_b;
    pilot.c_phases = cfg.c_phases;
    pilot.phi_bar = cfg.phi_bar;

    const AttackConfig atk = cfg.attack();

    // Covariance bundles for every grid angle (physical draws + metric eig).
    std::vector<const CovBundle*> bundles;
    bundles.reserve(grid.size());
    for (double th : grid)
        bundles.push_back(&covariance_bundle(cfg.channel_model(th), cfg.metric_tol));

    const double tol = calibrate_deltaf_tol(cfg, grid, mix_seed(seed, 0x701));

    std::vector<uint8_t> err(trials, 0), conf(trials, 0), und(trials, 0);
    parallel_trials(trials, cfg.workers, [&](uint64_t t) {
        Rng rng = Rng::for_trial(seed, t);
        const size_t gi = rng.uniform_index(grid.size());
        const size_t gj = rng.uniform_index(grid.size());
        const CovBundle& bb = *bundles[gi];
        const CovBundle& ba = *bundles[gj];

        PilotConfig pc = pilot;
        const uint64_t span = std::min<uint64_t>(
            static_cast<uint64_t>(pc.c_phases),
            book.size() > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<uint64_t>(book.size()));
        pc.phi0_index = static_cast<int>(rng.uniform_index(span));
        const Codeword cw = book.unrank(BigInt(pc.phi0_index));
        const Sap sap_b = map_codeword_to_sap(cw);
        const auto phases = pilot_phase_sequence(pc, kTrainingSymbols);
        const auto attack = realize_attack(atk, sap_b, phases, pc, book, rng);
        const CirRealization cir_b = draw_cir(bb.factor_pp, cfg.l_taps, rng);
        const CirRealization cir_a = draw_cir(ba.factor_pp, cfg.l_taps, rng);
        const RxGrid rx = synthesize_rx_grid(geo, sap_b, phases, pc.rho_b, attack, cir_b, cir_a,
                                             noise_var, rng);
        const DecodeResult dec = decode_grid(rx, book, thr, cfg.r_threshold, rng);

        if (dec.outcome.kind != IdentificationKind::CoinFlip) {
            err[t] = dec.outcome.bob_codeword == sap_b.active ? 0 : 1;
            return;
        }
        conf[t] = 1;

        // Pilot columns follow the candidate<->source association.
        Eigen::Vector2cd xb;
        xb << std::sqrt(pc.rho_b) * std::exp(cxd(0.0, phases[0])),
            std::sqrt(pc.rho_b) * std::exp(cxd(0.0, phases[1]));
        Eigen::Vector2cd xa = xb;
        for (size_t j = 0; j < attack.sap.size(); ++j)
            if (attack.sap[j]) {
                xa << attack.pilots[j](0), attack.pilots[j](1);
                break;
            }
        auto overlap_count = [](const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
            int c = 0;
            for (size_t i = 0; i < a.size(); ++i)
                c += a[i] & b[i];
            return c;
        };
        const bool cand0_is_bob =
            dec.separation.candidate0 == sap_b.active ||
            (dec.separation.candidate0 != attack.sap &&
             overlap_count(dec.separation.candidate0, sap_b.active) >=
                 overlap_count(dec.separation.candidate0, attack.sap));
        Alg1Context ctx;
        ctx.pilots.col(0) = cand0_is_bob ? xb : xa;
        ctx.pilots.col(1) = cand0_is_bob ? xa : xb;
        ctx.t_scalar = 1.0; // physical normalization on the decode path
        ctx.noise_var = noise_var;
        ctx.deltaf_tol = tol;
        ctx.r1_eig = bb.agg_eig;
        std::vector<int> duals;
        for (size_t j = 0; j < dec.observed.states.size(); ++j)
            if (dec.observed.states[j] == SubcarrierState::Dual)
                duals.push_back(static_cast<int>(j));
        if (!duals.empty()) {
            std::vector<int> rows;
            for (int j : duals)
                rows.push_back(geo.positions[static_cast<size_t>(j)]);
            ctx.kernel = make_decision_kernel(bb.agg_eig_metric,
                                              dft_submatrix(geo.n_fft, geo.l_taps, rows));
        }
        const Alg1Result alg = algorithm1(rx, dec, book, ctx, phases, pc.rho_b, rng);
        und[t] = alg.status == Alg1Status::IdentificationError ? 1 : 0;
        err[t] = alg.bob_codeword == sap_b.active ? 0 : 1;
    });

    IdentificationResult res;
    res.trials = trials;
    res.deltaf_tol = tol;
    for (uint64_t t = 0; t < trials; ++t) {
        res.errors += err[t];
        res.confusions += conf[t];
        res.undecidable += und[t];
    }
    res.error_rate = static_cast<double>(res.errors) / static_cast<double>(trials);
    return res;
}

// ---------------------------------------------------------------------------
// Scenario runners

namespace {

ResultTable run_erd_roc(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"n_t", "gamma", "trials", "false_alarms", "pf_hat", "ci_lo", "ci_hi"};
    if (cfg.trials == 0)
        return table;
    for (int n_t : cfg.n_t_list) {
        std::vector<double> t1(cfg.trials);
        parallel_trials(cfg.trials, cfg.workers, [&](uint64_t t) {
            Rng rng = Rng::for_trial(mix_seed(cfg.seed, static_cast<uint64_t>(n_t)), t);
            Eigen::MatrixXcd y(kTrainingSymbols, n_t);
            for (int k = 0; k < kTrainingSymbols; ++k)
                for (int i = 0; i < n_t; ++i)
                    y(k, i) = rng.cgaussian();
            t1[t] = eigenratio_statistics(y, 1.0).first;
        });
        for (int g = 0; g <= 40; ++g) {
            const double gamma = 1.0 + 0.05 * g;
            uint64_t alarms = 0;
            for (double v : t1)
                alarms += v > gamma ? 1 : 0;
            const double pf = static_cast<double>(alarms) / static_cast<double>(cfg.trials);
            const double se = std::sqrt(std::max(pf * (1.0 - pf), 0.0) /
                                        static_cast<double>(cfg.trials));
            table.rows.push_back({std::to_string(n_t), format_double(gamma),
                                  std::to_string(cfg.trials), std::to_string(alarms),
                                  format_double(pf), format_double(std::max(0.0, pf - 1.96 * se)),
                                  format_double(std::min(1.0, pf + 1.96 * se))});
        }
    }
    return table;
}

ResultTable run_delta_f_grid(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"theta1_idx", "theta2_idx", "theta1",      "theta2",
                    "trials",     "mean_delta_f", "se_delta_f", "limit_delta_f"};
    if (cfg.trials == 0)
        return table;
    const auto grid = dpd_grid(cfg.k_support);
    for (size_t i = 0; i < grid.size(); ++i) {
        for (size_t j = 0; j < grid.size(); ++j) {
            const DeltaFCell cell = delta_f_cell(cfg, grid[i], grid[j], cfg.trials,
                                                 mix_seed(cfg.seed, i * 97 + j));
            table.rows.push_back({std::to_string(i), std::to_string(j), format_double(grid[i]),
                                  format_double(grid[j]), std::to_string(cfg.trials),
                                  format_double(cell.mean), format_double(cell.se),
                                  format_double(cell.limit)});
        }
    }
    return table;
}

ResultTable run_nmse_cdf(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"variant", "run_id", "averages", "nmse", "nmse_db"};
    if (cfg.trials == 0)
        return table;
    if (cfg.n_fft % cfg.l_taps != 0)
        throw ConfigError("nmse_cdf: l_taps must divide n_fft");
    const int s_code = cfg.l_taps + (cfg.n_b + cfg.l_taps) % 2; // order ~ L, parity-corrected
    const IccCode book(cfg.n_b, s_code);
    const OneRingModel model = cfg.channel_model(0.0);
    const CovBundle& bundle = covariance_bundle(model, cfg.metric_tol);
    const double noise_var = cfg.rho_b * std::pow(10.0, -cfg.snr_db / 10.0);
    const std::vector<int> ideal = equally_spaced_positions(cfg.n_fft, cfg.l_taps, 0);

    for (const std::string variant : {"ideal", "random"}) {
        std::vector<double> run_nmse(static_cast<size_t>(cfg.runs));
        parallel_trials(static_cast<uint64_t>(cfg.runs), cfg.workers, [&](uint64_t r) {
            Rng rng = Rng::for_trial(mix_seed(cfg.seed, variant == "ideal" ? 0x1dea : 0x7a2d), r);
            std::vector<int> rows = ideal;
            if (variant == "random") {
                const auto c1 = book.unrank(random_bigint_below(rng, book.size()));
                const auto c2 = book.unrank(random_bigint_below(rng, book.size()));
                std::vector<int> overlap;
                for (int j = 0; j < cfg.n_b; ++j)
                    if (c1.bits[static_cast<size_t>(j)] && c2.bits[static_cast<size_t>(j)])
                        overlap.push_back(j); // contiguous embedding
                // use at most L of the overlapping subcarriers, drawn uniformly
                for (size_t i = 0; i < std::min<size_t>(overlap.size(),
                                                        static_cast<size_t>(cfg.l_taps));
                     ++i)
                    std::swap(overlap[i], overlap[i + rng.uniform_index(overlap.size() - i)]);
                overlap.resize(std::min<size_t>(overlap.size(), static_cast<size_t>(cfg.l_taps)));
                rows = overlap;
            }
            const Eigen::MatrixXcd f_ls = dft_submatrix(cfg.n_fft, cfg.l_taps, rows);
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(f_ls);
            double acc = 0.0;
            for (int a = 0; a < cfg.averages; ++a) {
                const CirRealization cir = draw_cir(bundle.factor_pp, cfg.l_taps, rng);
                Eigen::MatrixXcd y = f_ls * cir.taps.transpose(); // s x n_t
                const double sd = std::sqrt(noise_var / cfg.rho_b);
                for (Eigen::Index qq = 0; qq < y.rows(); ++qq)
                    for (Eigen::Index ii = 0; ii < y.cols(); ++ii)
                        y(qq, ii) += sd * rng.cgaussian();
                const Eigen::MatrixXcd taps_hat = cod.solve(y).transpose();
                acc += (taps_hat - cir.taps).squaredNorm() / cir.taps.squaredNorm();
            }
            run_nmse[r] = acc / cfg.averages;
        });
        for (int r = 0; r < cfg.runs; ++r)
            table.rows.push_back({variant, std::to_string(r), std::to_string(cfg.averages),
                                  format_double(run_nmse[static_cast<size_t>(r)]),
                                  format_double(to_db(run_nmse[static_cast<size_t>(r)]))});
        std::vector<double> sorted = run_nmse;
        std::sort(sorted.begin(), sorted.end());
        const double p10 = sorted[static_cast<size_t>(0.1 * (cfg.runs - 1))];
        const double p90 = sorted[static_cast<size_t>(0.9 * (cfg.runs - 1))];
        double mean = 0.0;
        for (double v : sorted)
            mean += v;
        mean /= cfg.runs;
        table.rows.push_back({variant, "agg_mean", std::to_string(cfg.averages),
                              format_double(mean), format_double(to_db(mean))});
        table.rows.push_back({variant, "agg_p10", std::to_string(cfg.averages),
                              format_double(p10), format_double(to_db(p10))});
        table.rows.push_back({variant, "agg_p90", std::to_string(cfg.averages),
                              format_double(p90), format_double(to_db(p90))});
    }
    return table;
}

ResultTable run_tradeoff_curve(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"n_fft", "l_taps", "n_b", "s_star", "w",        "s",          "rate",
                    "p_i",   "p_i_over_k", "p_s", "s_t",   "p_i_x100", "p_s_quarter"};
    const int span = s_star(cfg.n_fft, cfg.l_taps);
    const int n_b = span; // low-N_B regime: n_b = s*
    for (int w = n_b; 2 * w - n_b >= 1; --w) {
        const int s = 2 * w - n_b;
        const double rate = code_rate(n_b, s);
        const double p_i = iep_closed_form(n_b, s);
        const double p_s = stability_closed(n_b, w, span);
        table.rows.push_back({std::to_string(cfg.n_fft), std::to_string(cfg.l_taps),
                              std::to_string(n_b), std::to_string(span), std::to_string(w),
                              std::to_string(s), format_double(rate), format_double(p_i),
                              format_double(p_i / cfg.k_dpd), format_double(p_s),
                              format_double(p_s > 0.0 ? 1.0 / p_s
                                                      : std::numeric_limits<double>::infinity()),
                              format_double(p_i * 100.0), format_double(std::pow(p_s, 0.25))});
    }
    return table;
}

ResultTable run_iep_surface(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"n_b", "s_star", "p_i_closed", "p_i_over_k", "p_i_empirical"};
    for (int span = 4; span <= 12; ++span) {
        for (int k = 2; k <= cfg.k_max; ++k) {
            const int n_b = (span + 1) * k - 1;
            OptimalCodeParams p;
            try {
                p = optimal_code_params(span, n_b);
            } catch (const ConfigError&) {
                continue;
            }
            const double p_i = iep_closed_form(n_b, p.s);
            double empirical = std::numeric_limits<double>::quiet_NaN();
            if (cfg.trials > 0 && n_b <= 16) {
                DecodeTrialConfig dt{IccCode(n_b, p.s),
                                     GridGeometry{cfg.n_fft, cfg.n_t, cfg.l_taps,
                                                  contiguous_positions(n_b)},
                                     PilotConfig{cfg.rho_b, cfg.c_phases, 0, cfg.phi_bar},
                                     cfg.attack(),
                                     cfg.channel_model(0.0),
                                     cfg.channel_model(kPi / 6.0),
                                     cfg.snr_db,
                                     cfg.r_threshold,
                                     cfg.workers};
                const ErdThresholds thr = scenario_thresholds(cfg);
                empirical = measure_sep_iep(dt, thr, cfg.trials,
                                            mix_seed(cfg.seed, static_cast<uint64_t>(n_b)))
                                .iep_rate;
            }
            table.rows.push_back({std::to_string(n_b), std::to_string(span), format_double(p_i),
                                  format_double(p_i / cfg.k_surface), format_double(empirical)});
        }
    }
    return table;
}

ResultTable run_rate_curve(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"s_star", "k", "n_b", "w", "s", "rate_opt", "rate_ref_s1", "rate_bound"};
    for (int span = 4; span <= 7; ++span) {
        const int n_fft = 2 * (span - 1); // L = 2 realization of this span
        for (int k = 2; k <= cfg.k_max; ++k) {
            const int n_b = (span + 1) * k - 1;
            OptimalCodeParams p;
            try {
                p = optimal_code_params(span, n_b);
            } catch (const ConfigError&) {
                continue;
            }
            const double ref = code_rate(2 * k + 1, 1);
            const double bound = rate_lower_bound(n_b, n_fft, 2);
            table.rows.push_back({std::to_string(span), std::to_string(k), std::to_string(n_b),
                                  std::to_string(p.w), std::to_string(p.s), format_double(p.rate),
                                  format_double(ref), format_double(bound)});
        }
    }
    return table;
}

ResultTable run_nmse_vs_snr(const ScenarioConfig& cfg) {
    ResultTable table;
    table.header = {"n_t",           "snr_db",       "trials",      "nmse_ls_db",
                    "nmse_lmmse_db", "nmse_mmse_db", "eps_gap_rel"};
    if (cfg.trials == 0)
        return table;
    for (int n_t : cfg.n_t_list) {
        for (double snr : cfg.snr_list) {
            const NmsePoint p = nmse_experiment(cfg, n_t, snr, cfg.trials,
                                                mix_seed(cfg.seed,
                                                         static_cast<uint64_t>(n_t * 1000 +
                                                                               int(snr * 10))));
            const double gap = std::abs(p.eps_b_sq - p.eps_a_sq) / std::max(p.eps_b_sq, 1e-300);
            table.rows.push_back({std::to_string(n_t), format_double(snr),
                                  std::to_string(cfg.trials), format_double(to_db(p.nmse_ls)),
                                  format_double(to_db(p.nmse_lmmse)),
                                  format_double(to_db(p.nmse_mmse)), format_double(gap)});
        }
    }
    return table;
}

} // namespace

ResultTable run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.scenario == "erd_roc")
        return run_erd_roc(cfg);
    if (cfg.scenario == "delta_f_grid")
        return run_delta_f_grid(cfg);
    if (cfg.scenario == "nmse_cdf")
        return run_nmse_cdf(cfg);
    if (cfg.scenario == "tradeoff_curve")
        return run_tradeoff_curve(cfg);
    if (cfg.scenario == "iep_surface")
        return run_iep_surface(cfg);
    if (cfg.scenario == "rate_curve")
        return run_rate_curve(cfg);
    if (cfg.scenario == "nmse_vs_snr")
        return run_nmse_vs_snr(cfg);
    throw ConfigError("unknown scenario '" + cfg.scenario + "'");
}

} // namespace icc_cta
