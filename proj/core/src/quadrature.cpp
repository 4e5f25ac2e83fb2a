// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/quadrature.hpp"

#include <array>
#include <cmath>

namespace icc_cta {

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric; positive half listed).
constexpr std::array<double, 8> kNodes15 = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601700,
    0.8482065834104272,
    0.9372733924007059,
    0.9879925180204854,
};
constexpr std::array<double, 8> kWeights15 = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};

// 7-point rule used as the embedded error estimate.
constexpr std::array<double, 4> kNodes7 = {
    0.0,
    0.4058451513773972,
    0.7415311855993945,
    0.9491079123427585,
};
constexpr std::array<double, 4> kWeights7 = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892766,
    0.1294849661688697,
};

cxd gauss15(const std::function<cxd(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cxd acc = kWeights15[0] * f(c);
    for (size_t i = 1; i < kNodes15.size(); ++i)
        acc += kWeights15[i] * (f(c - h * kNodes15[i]) + f(c + h * kNodes15[i]));
    return acc * h;
}

cxd gauss7(const std::function<cxd(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cxd acc = kWeights7[0] * f(c);
    for (size_t i = 1; i < kNodes7.size(); ++i)
        acc += kWeights7[i] * (f(c - h * kNodes7[i]) + f(c + h * kNodes7[i]));
    return acc * h;
}

cxd adapt(const std::function<cxd(double)>& f, double a, double b, double tol, int depth) {
    const cxd fine = gauss15(f, a, b);
    const cxd coarse = gauss7(f, a, b);
    if (std::abs(fine - coarse) <= tol)
        return fine;
    if (depth >= 40)
        throw NumericalError("integrate: adaptive quadrature failed to converge");
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1);
}

} // namespace

cxd integrate(const std::function<cxd(double)>& f, double a, double b, double abs_tol) {
    if (!(b > a))
        throw std::invalid_argument("integrate: requires b > a");
    return adapt(f, a, b, abs_tol, 0);
}

} // namespace icc_cta
