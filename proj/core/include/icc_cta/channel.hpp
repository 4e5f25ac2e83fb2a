// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_CHANNEL_HPP
#define ICC_CTA_CHANNEL_HPP

#include <vector>

#include "icc_cta/common.hpp"
#include "icc_cta/rng.hpp"

namespace icc_cta {

// One-ring scattering geometry around a transmitter as seen by the ULA.
struct OneRingModel {
    double theta = 0.0;     // mean AoA, radians, |theta| <= pi/3
    double delta = kPi / 18; // angle spread, radians, 0 < delta < pi/2
    double d_spacing = 0.5; // antenna spacing in wavelengths, [0, 1/2]
    int n_t = 1;            // array size
    int l_taps = 1;         // multipath taps

    void validate() const;
};

enum class TraceConvention {
    per_path, // diagonal = 1/L, trace = n_t / L
    aggregate // L x per_path, trace = n_t
};

struct CovarianceMatrix {
    Eigen::MatrixXcd entries;
    TraceConvention convention = TraceConvention::per_path;

    CovarianceMatrix to_aggregate(int l_taps) const;
};

// Hermitian eigendecomposition with eigenvalues sorted descending and the
// numerical rank at a relative floor.
struct HermEig {
    Eigen::MatrixXcd vectors; // columns, descending eigenvalue order
    Eigen::VectorXd values;
    int rank = 0;
};

HermEig eig_hermitian(const Eigen::MatrixXcd& m, double rank_tol = kRankTol);

// n x rank factor A with A A^H = m (PSD input required).
Eigen::MatrixXcd sqrt_factor(const HermEig& eig);

// Moore-Penrose pseudo-inverse restricted to eigenvalues above tol * lambda_max.
Eigen::MatrixXcd pinv_floored(const HermEig& eig);

struct CirRealization {
    Eigen::MatrixXcd taps;   // n_t x l_taps
    std::vector<double> pdp; // length l_taps, sums to 1 under per_path draws
};

// Entry (m, n) = (1/(2*delta*L)) * integral of exp(-j 2 pi D (m-n) sin t)
// over [theta - delta, theta + delta]; Hermitian Toeplitz by construction.
CovarianceMatrix one_ring_covariance(const OneRingModel& model, double quad_tol = 1e-10);

// Draws one CIR realization: per path, cov_factor * g with g i.i.d. CN(0,1).
// `cov_factor` is sqrt_factor(eig of the per-path covariance) for the
// normalized-PDP convention, or of the aggregate covariance for the
// unit-per-path (Kronecker estimation) convention.
CirRealization draw_cir(const Eigen::MatrixXcd& cov_factor, int l_taps, Rng& rng);

// |rows| x L matrix of exp(-j 2 pi r c / N); unit-modulus entries.
Eigen::MatrixXcd dft_submatrix(int n_fft, int l_taps, const std::vector<int>& rows);

struct AoaModel {
    enum class Kind { CPD, DPD };
    Kind kind = Kind::CPD;
    int k_support = 1; // DPD grid size

    void validate() const;
};

// DPD support: k equally spaced angles over [-pi/3, pi/3], endpoints included.
std::vector<double> dpd_grid(int k);

double sample_mean_aoa(const AoaModel& model, Rng& rng);

} // namespace icc_cta

#endif
