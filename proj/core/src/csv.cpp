// SPDX-License-Identifier: Apache-2.0
//
// icc-cta: anti-jamming channel training for massive-MISO OFDM, simulation library
// Copyright (C) 2026 icc-cta contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "icc_cta/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace icc_cta {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ofstream& os, const std::vector<std::string>& row, char sep) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i)
            os << sep;
        os << (sep == ',' ? escape(row[i]) : row[i]);
    }
    os << '\n';
}

} // namespace

void write_csv(const ResultTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("write_csv: cannot open '" + path + "'");
    write_row(os, table.header, ',');
    for (const auto& row : table.rows)
        write_row(os, row, ',');
    if (!os)
        throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

void write_dat(const ResultTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("write_dat: cannot open '" + path + "'");
    os << '#';
    write_row(os, table.header, ' ');
    for (const auto& row : table.rows)
        write_row(os, row, ' ');
    if (!os)
        throw std::runtime_error("write_dat: write failed for '" + path + "'");
}

ResultTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("read_csv: cannot open '" + path + "'");
    ResultTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::string cell;
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cell += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(cell);
                cell.clear();
            } else {
                cell += c;
            }
        }
        row.push_back(cell);
        if (first) {
            table.header = row;
            first = false;
        } else {
            table.rows.push_back(row);
        }
    }
    return table;
}

} // namespace icc_cta
