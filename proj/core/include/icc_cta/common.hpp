// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_COMMON_HPP
#define ICC_CTA_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

namespace icc_cta {

using cxd = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr double kPi = 3.14159265358979323846;

// Sector served by the array; mean AoAs live in [-kSector, kSector].
inline constexpr double kSectorHalfWidth = kPi / 3.0;

// Relative eigenvalue floor shared by rank decisions and pseudo-inverses.
inline constexpr double kRankTol = 1e-8;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace icc_cta

#endif
