// Copyright 2026 The qgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal numeric CSV reading and writing.

#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qgate/errors.hpp"

namespace qgate::io {

/// Input file that does not exist or cannot be opened.
class MissingFile : public Error {
public:
    explicit MissingFile(const std::string& path) : Error("cannot open input file: " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw InvalidArgument("CSV: missing column '" + std::string(name) + "'");
    }
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const std::string t = trim(s);
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t.empty()) {
        throw InvalidArgument("cannot parse number '" + t + "' in " + std::string(what));
    }
    return v;
}

/// Reads a CSV with a header row; every required column must be present.
inline Table read_csv(const std::string& path, const std::vector<std::string>& required = {}) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) break;
    }
    t.header = split(line);
    for (const auto& name : required) (void)t.column(name);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(t.header.size()) + " columns");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c, path + ":" + std::to_string(line_no)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path), columns_(header.size()) {
        if (!out_) throw Error("cannot open output file: " + path);
        out_ << std::setprecision(17);
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        detail::require(values.size() == columns_, "CsvWriter: row width does not match header");
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace qgate::io
