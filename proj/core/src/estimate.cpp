// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/estimate.hpp"

#include <cmath>

namespace icc_cta {

OverlapObservation build_overlap_observation(const RxGrid& grid, const std::vector<int>& dual,
                                             const Eigen::Matrix2cd& pilots) {
    if (dual.empty())
        throw std::invalid_argument("build_overlap_observation: empty overlap set");
    const int s = static_cast<int>(dual.size());
    const int n_t = grid.geometry.n_t;
    OverlapObservation obs;
    obs.n_t = n_t;
    obs.x_l = pilots;
    obs.overlap.reserve(dual.size());
    for (int j : dual) {
        if (j < 0 || j >= grid.n_b())
            throw std::out_of_range("build_overlap_observation: dual index out of range");
        obs.overlap.push_back(grid.geometry.positions[static_cast<size_t>(j)]);
    }
    obs.f_ls = dft_submatrix(grid.geometry.n_fft, grid.geometry.l_taps, obs.overlap);
    obs.y_l.resize(2, static_cast<Eigen::Index>(n_t) * s);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < n_t; ++i)
            for (int q = 0; q < s; ++q)
                obs.y_l(k, static_cast<Eigen::Index>(i) * s + q) =
                    grid.blocks[static_cast<size_t>(dual[static_cast<size_t>(q)])](k, i);
    return obs;
}

namespace {

FsEstimatePair apply_combiners(const OverlapObservation& obs, const Eigen::Matrix2cd& c_y,
                               double t_scalar) {
    Eigen::Matrix2cd inv;
    const double det_scale = std::abs(c_y.determinant());
    const double norm_scale = c_y.squaredNorm();
    if (det_scale < 1e-14 * std::max(norm_scale, 1e-300))
        throw NumericalError("lmmse_estimate: singular sample covariance (degenerate pilots)");
    inv = c_y.inverse();
    FsEstimatePair pair;
    pair.h_b_hat = t_scalar * (obs.x_l.col(0).adjoint() * inv) * obs.y_l;
    pair.h_a_hat = t_scalar * (obs.x_l.col(1).adjoint() * inv) * obs.y_l;
    return pair;
}

} // namespace

FsEstimatePair lmmse_estimate(const OverlapObservation& obs, double t_scalar, double noise_var) {
    (void)noise_var; // the sample covariance already carries the noise power
    if (obs.s() == 0)
        throw std::invalid_argument("lmmse_estimate: no overlapping subcarriers");
    const auto dim = static_cast<double>(obs.y_l.cols());
    const Eigen::Matrix2cd c_y = (obs.y_l * obs.y_l.adjoint()) / dim;
    return apply_combiners(obs, c_y, t_scalar);
}

FsEstimatePair mmse_estimate(const OverlapObservation& obs, double t_scalar, double noise_var) {
    if (obs.s() == 0)
        throw std::invalid_argument("mmse_estimate: no overlapping subcarriers");
    const Eigen::Matrix2cd c_y =
        t_scalar * (obs.x_l * obs.x_l.adjoint()) + noise_var * Eigen::Matrix2cd::Identity();
    return apply_combiners(obs, c_y, t_scalar);
}

Eigen::RowVectorXcd lmmse_estimate_single(const OverlapObservation& obs, int column,
                                          double t_scalar) {
    if (column < 0 || column > 1)
        throw std::invalid_argument("lmmse_estimate_single: column must be 0 or 1");
    const auto dim = static_cast<double>(obs.y_l.cols());
    const Eigen::Matrix2cd c_y = (obs.y_l * obs.y_l.adjoint()) / dim;
    const double det_scale = std::abs(c_y.determinant());
    if (det_scale < 1e-14 * std::max(c_y.squaredNorm(), 1e-300))
        throw NumericalError("lmmse_estimate_single: singular sample covariance");
    return t_scalar * (obs.x_l.col(column).adjoint() * c_y.inverse()) * obs.y_l;
}

double nmse(const Eigen::RowVectorXcd& estimate, const Eigen::RowVectorXcd& truth) {
    const double p = truth.squaredNorm();
    if (p == 0.0)
        throw std::domain_error("nmse: zero-power reference");
    return (estimate - truth).squaredNorm() / p;
}

DecisionKernel make_decision_kernel(const Eigen::MatrixXcd& r1_aggregate,
                                    const Eigen::MatrixXcd& f_ls, double metric_tol) {
    return make_decision_kernel(eig_hermitian(r1_aggregate, metric_tol), f_ls);
}

DecisionKernel make_decision_kernel(const HermEig& r1_eig_metric, const Eigen::MatrixXcd& f_ls) {
    DecisionKernel k;
    k.n_t = static_cast<int>(r1_eig_metric.vectors.rows());
    k.s = static_cast<int>(f_ls.rows());
    k.r1_pinv = pinv_floored(r1_eig_metric);
    k.rho1 = r1_eig_metric.rank;
    const Eigen::MatrixXcd ks = f_ls.conjugate() * f_ls.transpose();
    const HermEig ef = eig_hermitian(ks, kRankTol);
    k.ks_pinv = pinv_floored(ef);
    k.rho_f = ef.rank;
    return k;
}

double decision_metric(const Eigen::RowVectorXcd& h_hat, const DecisionKernel& kernel) {
    if (h_hat.size() != static_cast<Eigen::Index>(kernel.n_t) * kernel.s)
        throw std::invalid_argument("decision_metric: estimate length != n_t * s");
    // antenna-major reshape: element i*s + q -> M(i, q)
    Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        h_hat.data(), kernel.n_t, kernel.s);
    const Eigen::MatrixXcd am = kernel.r1_pinv * m;
    const Eigen::MatrixXcd inner = m.adjoint() * am; // s x s
    return (inner * kernel.ks_pinv).trace().real();
}

double delta_f_limit(const DecisionKernel& kernel, const Eigen::MatrixXcd& r2_aggregate) {
    const double tr = (r2_aggregate * kernel.r1_pinv).trace().real();
    return kernel.rho_f * (kernel.rho1 - tr);
}

AngularDecision delta_f(const FsEstimatePair& pair, const DecisionKernel& kernel, double tol) {
    AngularDecision d;
    d.delta_f = decision_metric(pair.h_b_hat, kernel) - decision_metric(pair.h_a_hat, kernel);
    if (d.delta_f > tol)
        d.verdict = AngularVerdict::BobIsH0;
    else if (d.delta_f < -tol)
        d.verdict = AngularVerdict::BobIsH1;
    else
        d.verdict = AngularVerdict::Undecidable;
    return d;
}

CirRecovery recover_cir(const Eigen::RowVectorXcd& h_hat, const Eigen::MatrixXcd& f_ls,
                        const HermEig& r1_eig, int n_t) {
    const int s = static_cast<int>(f_ls.rows());
    const int l_taps = static_cast<int>(f_ls.cols());
    if (s < l_taps)
        throw NumericalError("recover_cir: under-determined, s < L");
    if (h_hat.size() != static_cast<Eigen::Index>(n_t) * s)
        throw std::invalid_argument("recover_cir: estimate length != n_t * s");
    Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        h_hat.data(), n_t, s);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(f_ls);
    if (cod.rank() < l_taps)
        throw NumericalError("recover_cir: rank-deficient DFT submatrix");
    CirRecovery rec;
    rec.taps_hat = cod.solve(m.transpose()).transpose(); // n_t x L

    // Whiten the antenna side: g = rowvec(R1^{+1/2} taps).
    Eigen::MatrixXcd white = Eigen::MatrixXcd::Zero(r1_eig.vectors.rows(), r1_eig.vectors.rows());
    for (int i = 0; i < r1_eig.rank; ++i)
        white.noalias() += (1.0 / std::sqrt(r1_eig.values(i))) * r1_eig.vectors.col(i) *
                           r1_eig.vectors.col(i).adjoint();
    const Eigen::MatrixXcd g = white * rec.taps_hat; // n_t x L
    rec.g_whitened.resize(static_cast<Eigen::Index>(n_t) * l_taps);
    for (int i = 0; i < n_t; ++i)
        for (int l = 0; l < l_taps; ++l)
            rec.g_whitened(static_cast<Eigen::Index>(i) * l_taps + l) = g(i, l);
    return rec;
}

namespace {

// Per-antenna least squares on the given code-domain positions, symbol k0.
CirRecovery ls_recover(const RxGrid& grid, const std::vector<int>& positions_codes,
                       const std::vector<double>& bob_phases, double rho_b,
                       const HermEig& r1_eig) {
    const int n_t = grid.geometry.n_t;
    const int s = static_cast<int>(positions_codes.size());
    Eigen::RowVectorXcd fs(static_cast<Eigen::Index>(n_t) * s);
    const cxd x0 = std::sqrt(rho_b) * std::exp(cxd(0.0, bob_phases[0]));
    for (int i = 0; i < n_t; ++i)
        for (int q = 0; q < s; ++q)
            fs(static_cast<Eigen::Index>(i) * s + q) =
                grid.blocks[static_cast<size_t>(positions_codes[static_cast<size_t>(q)])](0, i) *
                (std::conj(x0) / std::norm(x0));
    std::vector<int> rows;
    rows.reserve(positions_codes.size());
    for (int j : positions_codes)
        rows.push_back(grid.geometry.positions[static_cast<size_t>(j)]);
    const Eigen::MatrixXcd f_ls = dft_submatrix(grid.geometry.n_fft, grid.geometry.l_taps, rows);
    return recover_cir(fs, f_ls, r1_eig, n_t);
}

std::vector<int> positions_of(const std::vector<uint8_t>& mask) {
    std::vector<int> idx;
    for (size_t j = 0; j < mask.size(); ++j)
        if (mask[j])
            idx.push_back(static_cast<int>(j));
    return idx;
}

std::vector<int> dual_positions(const ObservedPattern& obs) {
    std::vector<int> idx;
    for (size_t j = 0; j < obs.states.size(); ++j)
        if (obs.states[j] == SubcarrierState::Dual)
            idx.push_back(static_cast<int>(j));
    return idx;
}

} // namespace

Alg1Result algorithm1(const RxGrid& grid, const DecodeResult& decoded, const IccCode& code,
                      const Alg1Context& ctx, const std::vector<double>& bob_phases, double rho_b,
                      Rng& tie_rng) {
    Alg1Result out;
    const auto& outcome = decoded.outcome;
    if (outcome.kind == IdentificationKind::Failed) {
        out.status = Alg1Status::IdentificationError;
        return out;
    }

    const std::vector<int> duals = dual_positions(decoded.observed);

    if (outcome.kind == IdentificationKind::NoAttackDetected) {
        out.status = Alg1Status::NoAttackLsPath;
        out.bob_codeword = outcome.bob_codeword;
        const auto actives = positions_of(outcome.bob_codeword);
        if (static_cast<int>(actives.size()) >= grid.geometry.l_taps)
            out.cir = ls_recover(grid, actives, bob_phases, rho_b, ctx.r1_eig);
        else
            out.status = Alg1Status::CsViolation;
        return out;
    }

    if (outcome.kind == IdentificationKind::UniqueBob) {
        out.status = Alg1Status::IdentifiedLmmsePath;
        out.bob_codeword = outcome.bob_codeword;
        if (!duals.empty()) {
            const OverlapObservation obs = build_overlap_observation(grid, duals, ctx.pilots);
            const Eigen::RowVectorXcd h_b = lmmse_estimate_single(obs, 0, ctx.t_scalar);
            if (obs.s() >= grid.geometry.l_taps)
                out.cir = recover_cir(h_b, obs.f_ls, ctx.r1_eig, grid.geometry.n_t);
            else
                out.status = Alg1Status::CsViolation;
        } else {
            const auto actives = positions_of(outcome.bob_codeword);
            if (static_cast<int>(actives.size()) >= grid.geometry.l_taps)
                out.cir = ls_recover(grid, actives, bob_phases, rho_b, ctx.r1_eig);
            else
                out.status = Alg1Status::CsViolation;
        }
        return out;
    }

    // Confusion: both candidates are valid codewords. Angular identification.
    if (duals.empty()) {
        out.status = Alg1Status::IdentificationError;
        out.bob_codeword = tie_rng.bernoulli(0.5) ? decoded.separation.candidate0
                                                  : decoded.separation.candidate1;
        return out;
    }
    const OverlapObservation obs = build_overlap_observation(grid, duals, ctx.pilots);
    const FsEstimatePair pair = lmmse_estimate(obs, ctx.t_scalar, ctx.noise_var);
    out.angular = delta_f(pair, ctx.kernel, ctx.deltaf_tol);
    const Eigen::RowVectorXcd* chosen = nullptr;
    switch (out.angular.verdict) {
    case AngularVerdict::BobIsH0:
        out.status = Alg1Status::ConfusionResolvedH0;
        out.bob_codeword = decoded.separation.candidate0;
        chosen = &pair.h_b_hat;
        break;
    case AngularVerdict::BobIsH1:
        out.status = Alg1Status::ConfusionResolvedH1;
        out.bob_codeword = decoded.separation.candidate1;
        chosen = &pair.h_a_hat;
        break;
    case AngularVerdict::Undecidable:
        out.status = Alg1Status::IdentificationError;
        if (tie_rng.bernoulli(0.5)) {
            out.bob_codeword = decoded.separation.candidate0;
            chosen = &pair.h_b_hat;
        } else {
            out.bob_codeword = decoded.separation.candidate1;
            chosen = &pair.h_a_hat;
        }
        break;
    }
    if (chosen && obs.s() >= grid.geometry.l_taps)
        out.cir = recover_cir(*chosen, obs.f_ls, ctx.r1_eig, grid.geometry.n_t);
    return out;
}

} // namespace icc_cta
