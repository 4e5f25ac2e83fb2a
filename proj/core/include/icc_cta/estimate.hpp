// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_ESTIMATE_HPP
#define ICC_CTA_ESTIMATE_HPP

#include <optional>
#include <vector>

#include "icc_cta/channel.hpp"
#include "icc_cta/common.hpp"
#include "icc_cta/decode.hpp"

namespace icc_cta {

// Two-symbol stack of the overlapping subcarriers, antenna-major:
// column (i*s + q) of y_l is antenna i, overlap position q.
struct OverlapObservation {
    Eigen::MatrixXcd y_l;       // 2 x (n_t * s)
    Eigen::Matrix2cd x_l;       // [x_{L,1} x_{L,2}] pilot columns
    std::vector<int> overlap;   // P_s, FFT-grid row indices, |P_s| = s
    Eigen::MatrixXcd f_ls;      // s x L DFT submatrix at P_s
    int n_t = 0;

    int s() const { return static_cast<int>(overlap.size()); }
};

// Builds the observation from symbols k0, k1 of a received grid. `dual` holds
// code-domain subcarrier indices (positions into grid.blocks).
OverlapObservation build_overlap_observation(const RxGrid& grid, const std::vector<int>& dual,
                                             const Eigen::Matrix2cd& pilots);

struct FsEstimatePair {
    Eigen::RowVectorXcd h_b_hat;
    Eigen::RowVectorXcd h_a_hat;
};

// Asymptotically optimal two-user LMMSE separation from the sample covariance
// C_Y = Y Y^H / (n_t s). The scalar weight equals the per-element FS channel
// power under the trace convention of the channel draw (L for aggregate-drawn
// Kronecker channels, 1 for normalized-PDP channels).
FsEstimatePair lmmse_estimate(const OverlapObservation& obs, double t_scalar, double noise_var);

// Genie benchmark: same combiner built from the statistical covariance
// T X X^H + sigma^2 I instead of the sample covariance.
FsEstimatePair mmse_estimate(const OverlapObservation& obs, double t_scalar, double noise_var);

// Single-user combiner from one pilot column only (the no-confusion path:
// the receiver uses just the identified pilots).
Eigen::RowVectorXcd lmmse_estimate_single(const OverlapObservation& obs, int column,
                                          double t_scalar);

double nmse(const Eigen::RowVectorXcd& estimate, const Eigen::RowVectorXcd& truth);

// Spectral kernel of the angular decision metric
// f(r) = Re Tr( R1^+ . M . Ks^+ . M^H ),  M = antenna-major reshape of r,
// with Ks = conj(F) F^T the s x s subcarrier kernel (same nonzero spectrum as
// the tap-side Gram F^T conj(F)). Pseudo-inverses are floored at metric_tol.
struct DecisionKernel {
    Eigen::MatrixXcd r1_pinv;
    int rho1 = 0;
    Eigen::MatrixXcd ks_pinv;
    int rho_f = 0;
    int n_t = 0;
    int s = 0;
};

DecisionKernel make_decision_kernel(const Eigen::MatrixXcd& r1_aggregate,
                                    const Eigen::MatrixXcd& f_ls, double metric_tol = 1e-2);

// Variant reusing a precomputed antenna-side eigensystem (already at the
// metric tolerance); only the s x s subcarrier kernel is decomposed.
DecisionKernel make_decision_kernel(const HermEig& r1_eig_metric, const Eigen::MatrixXcd& f_ls);

double decision_metric(const Eigen::RowVectorXcd& h_hat, const DecisionKernel& kernel);

// Large-array limit of delta_f for channels drawn with per-path antenna
// factor R1 (Bob) vs R2 (attacker): rho_f * (rho1 - Tr(R2 R1^+)).
double delta_f_limit(const DecisionKernel& kernel, const Eigen::MatrixXcd& r2_aggregate);

enum class AngularVerdict { BobIsH0, BobIsH1, Undecidable };

struct AngularDecision {
    double delta_f = 0.0;
    AngularVerdict verdict = AngularVerdict::Undecidable;
};

AngularDecision delta_f(const FsEstimatePair& pair, const DecisionKernel& kernel, double tol);

// CIR recovery from an FS estimate on the overlap set. Requires s >= L.
struct CirRecovery {
    Eigen::MatrixXcd taps_hat;       // n_t x L, per-antenna least squares
    Eigen::RowVectorXcd g_whitened;  // 1 x (n_t * L), antenna side whitened by R1^{+1/2}
};

CirRecovery recover_cir(const Eigen::RowVectorXcd& h_hat, const Eigen::MatrixXcd& f_ls,
                        const HermEig& r1_eig, int n_t);

// Channel-estimation dispatch after decoding, per the protocol flow:
// no attack -> LS; attack without confusion -> the identified user's LMMSE
// estimate; confusion -> angular identification on the sign of delta_f,
// falling back to a fair coin inside the dead zone.
enum class Alg1Status {
    NoAttackLsPath,
    IdentifiedLmmsePath,
    ConfusionResolvedH0,
    ConfusionResolvedH1,
    IdentificationError, // dead zone; codeword decided by coin
    CsViolation          // s < L, CIR under-determined
};

struct Alg1Context {
    DecisionKernel kernel;          // built on Bob's known covariance
    Eigen::Matrix2cd pilots;        // column 0: candidate0's source, column 1: candidate1's
    double t_scalar = 1.0;
    double noise_var = 0.0;
    double deltaf_tol = 0.0;
    HermEig r1_eig;                 // aggregate covariance eigensystem (for whitening)
};

struct Alg1Result {
    Alg1Status status = Alg1Status::NoAttackLsPath;
    std::vector<uint8_t> bob_codeword;
    AngularDecision angular;
    std::optional<CirRecovery> cir;
};

Alg1Result algorithm1(const RxGrid& grid, const DecodeResult& decoded, const IccCode& code,
                      const Alg1Context& ctx, const std::vector<double>& bob_phases, double rho_b,
                      Rng& tie_rng);

} // namespace icc_cta

#endif
