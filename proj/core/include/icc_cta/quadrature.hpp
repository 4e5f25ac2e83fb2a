// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_QUADRATURE_HPP
#define ICC_CTA_QUADRATURE_HPP

#include <functional>

#include "icc_cta/common.hpp"

namespace icc_cta {

// Adaptive Gauss-Legendre integration of a complex-valued smooth integrand
// over [a, b]. Subdivides until the 15- vs 7-point estimates agree to
// abs_tol on each subinterval. Throws NumericalError if the recursion depth
// cap is reached before convergence.
cxd integrate(const std::function<cxd(double)>& f, double a, double b, double abs_tol = 1e-10);

} // namespace icc_cta

#endif
