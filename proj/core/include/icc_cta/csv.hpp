// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef ICC_CTA_CSV_HPP
#define ICC_CTA_CSV_HPP

#include <string>
#include <vector>

namespace icc_cta {

// Row-oriented result table with a fixed header. Cells are preformatted
// strings so reruns are byte-identical.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v); // %.12g, canonical nan/inf spellings

// RFC-4180-style CSV: quote cells containing comma/quote/newline, double
// embedded quotes, LF line endings, UTF-8 passthrough, header row first.
void write_csv(const ResultTable& table, const std::string& path);

// Plot-ready variant: space-separated columns, no quoting, '#'-prefixed header.
void write_dat(const ResultTable& table, const std::string& path);

// Minimal CSV reader for round-trip tests (handles the quoting we emit).
ResultTable read_csv(const std::string& path);

} // namespace icc_cta

#endif
