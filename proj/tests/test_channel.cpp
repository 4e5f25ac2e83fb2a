// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icc_cta/channel.hpp"

using namespace icc_cta;

namespace {

// Brute-force Riemann oracle for the one-ring integral.
cxd riemann_entry(double theta, double delta, double d_spacing, int l_taps, int sep, int points) {
    const double lo = theta - delta;
    const double hi = theta + delta;
    const double dx = (hi - lo) / points;
    cxd acc(0.0, 0.0);
    for (int i = 0; i < points; ++i) {
        const double t = lo + (i + 0.5) * dx;
        acc += std::exp(cxd(0.0, -2.0 * kPi * d_spacing * sep * std::sin(t)));
    }
    return acc * dx / (2.0 * delta * l_taps);
}

} // namespace

TEST_CASE("one-ring covariance against the Riemann oracle") {
    OneRingModel m;
    m.theta = 0.0;
    m.delta = kPi / 6;
    m.d_spacing = 0.5;
    m.n_t = 4;
    m.l_taps = 1;
    const auto cov = one_ring_covariance(m);
    CHECK(std::abs(cov.entries(0, 1) - riemann_entry(0.0, kPi / 6, 0.5, 1, -1, 1000000)) < 1e-8);
    CHECK(std::abs(cov.entries(2, 0) - riemann_entry(0.0, kPi / 6, 0.5, 1, 2, 1000000)) < 1e-8);
}

TEST_CASE("diagonal entries are 1/L and D = 0 collapses to rank one") {
    OneRingModel m;
    m.theta = 0.3;
    m.delta = kPi / 8;
    m.n_t = 6;
    m.l_taps = 4;
    SUBCASE("diagonal") {
        const auto cov = one_ring_covariance(m);
        for (int i = 0; i < m.n_t; ++i)
            CHECK(std::abs(cov.entries(i, i) - cxd(0.25, 0.0)) < 1e-12);
    }
    SUBCASE("zero spacing") {
        m.d_spacing = 0.0;
        const auto cov = one_ring_covariance(m);
        for (int i = 0; i < m.n_t; ++i)
            for (int j = 0; j < m.n_t; ++j)
                CHECK(std::abs(cov.entries(i, j) - cxd(0.25, 0.0)) < 1e-12);
        CHECK(eig_hermitian(cov.entries).rank == 1);
    }
}

TEST_CASE("covariance is Hermitian PSD across random models") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        OneRingModel m;
        m.theta = rng.uniform(-kPi / 3, kPi / 3);
        m.delta = rng.uniform(0.02, kPi / 2 - 0.02);
        m.d_spacing = rng.uniform(0.0, 0.5);
        m.n_t = 2 + static_cast<int>(rng.uniform_index(14));
        m.l_taps = 1 + static_cast<int>(rng.uniform_index(4));
        const auto cov = one_ring_covariance(m);
        CHECK((cov.entries - cov.entries.adjoint()).norm() < 1e-12);
        const auto eig = eig_hermitian(cov.entries);
        CHECK(eig.values(eig.values.size() - 1) >= -1e-10 * eig.values(0));
    }
}

TEST_CASE("aggregate trace equals n_t") {
    OneRingModel m;
    m.theta = -0.4;
    m.delta = kPi / 7;
    m.n_t = 32;
    m.l_taps = 4;
    const auto agg = one_ring_covariance(m).to_aggregate(m.l_taps);
    CHECK(std::abs(agg.entries.trace().real() - m.n_t) < 1e-9 * m.n_t);
    CHECK(std::abs(agg.entries.trace().imag()) < 1e-9);
}

TEST_CASE("numerical rank grows with spread and spacing, below n_t") {
    OneRingModel m;
    m.n_t = 64;
    m.l_taps = 1;
    int prev = 0;
    for (double delta : {kPi / 24, kPi / 12, kPi / 6}) {
        m.delta = delta;
        m.d_spacing = 0.5;
        const int rank = eig_hermitian(one_ring_covariance(m).entries).rank;
        CHECK(rank > prev);
        CHECK(rank < m.n_t);
        prev = rank;
    }
    m.delta = kPi / 6;
    m.d_spacing = 0.25;
    const int rank_half = eig_hermitian(one_ring_covariance(m).entries).rank;
    CHECK(rank_half < prev);
}

TEST_CASE("drawn CIRs reproduce the covariance") {
    OneRingModel m;
    m.theta = 0.0;
    m.delta = kPi / 6;
    m.d_spacing = 0.5;
    m.n_t = 32;
    m.l_taps = 2;
    const auto cov = one_ring_covariance(m);
    const auto factor = sqrt_factor(eig_hermitian(cov.entries));
    Rng rng(5);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(m.n_t, m.n_t);
    const int draws = 30000;
    for (int d = 0; d < draws; ++d) {
        const auto cir = draw_cir(factor, m.l_taps, rng);
        acc.noalias() += cir.taps.col(0) * cir.taps.col(0).adjoint();
    }
    acc /= draws;
    CHECK((acc - cov.entries).norm() / cov.entries.norm() < 0.03);
}

TEST_CASE("per-path power follows the normalized profile") {
    OneRingModel m;
    m.n_t = 8;
    m.l_taps = 4;
    const auto factor = sqrt_factor(eig_hermitian(one_ring_covariance(m).entries));
    Rng rng(6);
    double acc = 0.0;
    const int draws = 100000 / m.n_t;
    for (int d = 0; d < draws; ++d)
        acc += draw_cir(factor, m.l_taps, rng).taps.col(1).squaredNorm() / m.n_t;
    CHECK(acc / draws == doctest::Approx(1.0 / m.l_taps).epsilon(0.02));
}

TEST_CASE("identity factor gives i.i.d. taps, rank-1 factor coherent antennas") {
    Rng rng(7);
    SUBCASE("identity") {
        const int l = 4;
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(16, 16) / std::sqrt(double(l));
        const auto cir = draw_cir(id, l, rng);
        CHECK(cir.taps.rows() == 16);
        CHECK(cir.taps.cols() == l);
    }
    SUBCASE("fully coherent array") {
        OneRingModel m;
        m.d_spacing = 0.0;
        m.n_t = 8;
        m.l_taps = 2;
        const auto factor = sqrt_factor(eig_hermitian(one_ring_covariance(m).entries));
        const auto cir = draw_cir(factor, m.l_taps, rng);
        for (int i = 1; i < m.n_t; ++i)
            CHECK(std::abs(cir.taps(i, 0) - cir.taps(0, 0)) < 1e-9);
    }
}

TEST_CASE("DFT submatrix") {
    SUBCASE("row zero is all ones") {
        const auto f = dft_submatrix(16, 4, {0});
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(f(0, c) - cxd(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("equally spaced rows give equal eigenvalues") {
        const auto f = dft_submatrix(8, 2, {0, 4});
        const Eigen::MatrixXcd rf = f.transpose() * f.conjugate();
        const auto eig = eig_hermitian(rf);
        CHECK(eig.values(0) == doctest::Approx(eig.values(1)).epsilon(1e-12));
    }
    SUBCASE("full rows are orthogonal with squared norm N") {
        std::vector<int> rows(8);
        for (int i = 0; i < 8; ++i)
            rows[static_cast<size_t>(i)] = i;
        const auto f = dft_submatrix(8, 3, rows);
        const Eigen::MatrixXcd g = f.adjoint() * f;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK(std::abs(g(a, b) - (a == b ? cxd(8, 0) : cxd(0, 0))) < 1e-9);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(dft_submatrix(8, 2, {1, 1}), std::invalid_argument);
        CHECK_THROWS_AS(dft_submatrix(8, 2, {8}), std::out_of_range);
    }
}

TEST_CASE("mean AoA sampling") {
    SUBCASE("DPD grid with one point is the sector center") {
        AoaModel m{AoaModel::Kind::DPD, 1};
        Rng rng(8);
        for (int i = 0; i < 10; ++i)
            CHECK(sample_mean_aoa(m, rng) == 0.0);
    }
    SUBCASE("DPD five-point grid and collision rate") {
        const auto grid = dpd_grid(5);
        CHECK(grid.size() == 5);
        CHECK(grid.front() == doctest::Approx(-kPi / 3));
        CHECK(grid.back() == doctest::Approx(kPi / 3));
        CHECK(grid[2] == doctest::Approx(0.0));
        // symmetric, equally spaced
        for (size_t i = 1; i < grid.size(); ++i)
            CHECK(grid[i] - grid[i - 1] == doctest::Approx(kPi / 6));

        AoaModel m{AoaModel::Kind::DPD, 5};
        Rng rng(9);
        int collisions = 0;
        const int pairs = 100000;
        for (int t = 0; t < pairs; ++t)
            collisions += sample_mean_aoa(m, rng) == sample_mean_aoa(m, rng) ? 1 : 0;
        const double rate = static_cast<double>(collisions) / pairs;
        const double sigma = std::sqrt(0.2 * 0.8 / pairs);
        CHECK(std::abs(rate - 0.2) < 3 * sigma);
    }
    SUBCASE("CPD never collides") {
        AoaModel m{AoaModel::Kind::CPD, 0};
        m.k_support = 1;
        Rng rng(10);
        for (int t = 0; t < 100000; ++t)
            CHECK(sample_mean_aoa(m, rng) != sample_mean_aoa(m, rng));
    }
}

TEST_CASE("model validation") {
    OneRingModel m;
    m.theta = 2.0;
    CHECK_THROWS_AS(m.validate(), std::domain_error);
    m.theta = 0.0;
    m.d_spacing = 0.7;
    CHECK_THROWS_AS(m.validate(), std::domain_error);
}
