// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icc_cta/quadrature.hpp"

namespace icc_cta {

void OneRingModel::validate() const {
    if (std::abs(theta) > kSectorHalfWidth + 1e-12)
        throw std::domain_error("OneRingModel: |theta| must be <= pi/3");
    if (!(delta > 0.0) || delta >= kPi / 2)
        throw std::domain_error("OneRingModel: delta must lie in (0, pi/2)");
    if (d_spacing < 0.0 || d_spacing > 0.5)
        throw std::domain_error("OneRingModel: d_spacing must lie in [0, 1/2]");
    if (n_t < 1 || l_taps < 1)
        throw std::domain_error("OneRingModel: n_t and l_taps must be positive");
}

CovarianceMatrix CovarianceMatrix::to_aggregate(int l_taps) const {
    if (convention == TraceConvention::aggregate)
        return *this;
    CovarianceMatrix agg;
    agg.entries = entries * static_cast<double>(l_taps);
    agg.convention = TraceConvention::aggregate;
    return agg;
}

HermEig eig_hermitian(const Eigen::MatrixXcd& m, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig_hermitian: eigensolver failed");
    const auto n = m.rows();
    HermEig out;
    out.vectors.resize(n, n);
    out.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) { // flip to descending
        out.values(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    const double lmax = out.values.size() > 0 ? std::max(out.values(0), 0.0) : 0.0;
    const double floor = rank_tol * lmax;
    out.rank = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.values(i) > floor)
            ++out.rank;
    return out;
}

Eigen::MatrixXcd sqrt_factor(const HermEig& eig) {
    const double lmax = eig.values.size() > 0 ? eig.values(0) : 0.0;
    if (eig.values.size() > 0 && eig.values(eig.values.size() - 1) < -1e-10 * std::max(lmax, 1.0))
        throw NumericalError("sqrt_factor: matrix is not PSD");
    Eigen::MatrixXcd f(eig.vectors.rows(), eig.rank);
    for (int i = 0; i < eig.rank; ++i)
        f.col(i) = eig.vectors.col(i) * std::sqrt(std::max(eig.values(i), 0.0));
    return f;
}

Eigen::MatrixXcd pinv_floored(const HermEig& eig) {
    const auto n = eig.vectors.rows();
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < eig.rank; ++i)
        p.noalias() += (1.0 / eig.values(i)) * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    return p;
}

CovarianceMatrix one_ring_covariance(const OneRingModel& model, double quad_tol) {
    model.validate();
    const double lo = model.theta - model.delta;
    const double hi = model.theta + model.delta;
    const double norm = 1.0 / (2.0 * model.delta * model.l_taps);

    // Toeplitz: one integral per antenna separation.
    std::vector<cxd> col(static_cast<size_t>(model.n_t));
    col[0] = cxd(1.0 / model.l_taps, 0.0); // unit-modulus integrand on the diagonal
    for (int d = 1; d < model.n_t; ++d) {
        const double freq = 2.0 * kPi * model.d_spacing * d;
        col[static_cast<size_t>(d)] =
            norm * integrate([freq](double t) { return std::exp(cxd(0.0, -freq * std::sin(t))); },
                             lo, hi, quad_tol);
    }

    CovarianceMatrix cov;
    cov.convention = TraceConvention::per_path;
    cov.entries.resize(model.n_t, model.n_t);
    for (int m = 0; m < model.n_t; ++m) {
        for (int n = 0; n < model.n_t; ++n) {
            // entry depends on (m - n); negative separations conjugate
            cov.entries(m, n) =
                m >= n ? col[static_cast<size_t>(m - n)] : std::conj(col[static_cast<size_t>(n - m)]);
        }
    }
    return cov;
}

CirRealization draw_cir(const Eigen::MatrixXcd& cov_factor, int l_taps, Rng& rng) {
    if (l_taps < 1)
        throw std::domain_error("draw_cir: l_taps must be positive");
    const auto n_t = cov_factor.rows();
    const auto r = cov_factor.cols();
    CirRealization cir;
    cir.taps.resize(n_t, l_taps);
    Eigen::VectorXcd g(r);
    for (int l = 0; l < l_taps; ++l) {
        for (Eigen::Index i = 0; i < r; ++i)
            g(i) = rng.cgaussian();
        cir.taps.col(l).noalias() = cov_factor * g;
    }
    cir.pdp.assign(static_cast<size_t>(l_taps), 1.0 / l_taps);
    return cir;
}

Eigen::MatrixXcd dft_submatrix(int n_fft, int l_taps, const std::vector<int>& rows) {
    if (l_taps < 1 || l_taps > n_fft)
        throw std::domain_error("dft_submatrix: requires 1 <= l_taps <= n_fft");
    std::vector<int> seen(rows.begin(), rows.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("dft_submatrix: duplicate row indices");
    Eigen::MatrixXcd f(static_cast<Eigen::Index>(rows.size()), l_taps);
    for (size_t i = 0; i < rows.size(); ++i) {
        const int r = rows[i];
        if (r < 0 || r >= n_fft)
            throw std::out_of_range("dft_submatrix: row index outside [0, n_fft)");
        for (int c = 0; c < l_taps; ++c) {
            const double phase = -2.0 * kPi * static_cast<double>(r) * c / n_fft;
            f(static_cast<Eigen::Index>(i), c) = std::exp(cxd(0.0, phase));
        }
    }
    return f;
}

void AoaModel::validate() const {
    if (kind == Kind::DPD && k_support < 1)
        throw std::domain_error("AoaModel: DPD needs k_support >= 1");
}

std::vector<double> dpd_grid(int k) {
    if (k < 1)
        throw std::domain_error("dpd_grid: k must be positive");
    std::vector<double> grid(static_cast<size_t>(k));
    if (k == 1) {
        grid[0] = 0.0; // sector center
        return grid;
    }
    const double step = 2.0 * kSectorHalfWidth / (k - 1);
    for (int i = 0; i < k; ++i)
        grid[static_cast<size_t>(i)] = -kSectorHalfWidth + step * i;
    return grid;
}

double sample_mean_aoa(const AoaModel& model, Rng& rng) {
    model.validate();
    if (model.kind == AoaModel::Kind::CPD)
        return rng.uniform(-kSectorHalfWidth, kSectorHalfWidth);
    const auto grid = dpd_grid(model.k_support);
    return grid[rng.uniform_index(grid.size())];
}

} // namespace icc_cta
