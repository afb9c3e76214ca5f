#include "gstwdp/csv_io.hpp"

#include "gstwdp/error.hpp"
#include "gstwdp/fitting.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace gstwdp::io {

namespace {

bool is_separator(char c) { return c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r'; }

// Splits and parses one line; false if any field is not a number.
bool parse_line(std::string_view line, std::vector<double>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_separator(line[i])) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !is_separator(line[j])) ++j;
        double v = 0.0;
        const char* first = line.data() + i;
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, line.data() + j, v);
        if (ec != std::errc() || ptr != line.data() + j) return false;
        out.push_back(v);
        i = j;
    }
    return true;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::vector<std::vector<double>> read_columns(std::istream& in) {
    std::vector<std::vector<double>> cols;
    std::string line;
    std::vector<double> fields;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        if (!parse_line(line, fields)) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw DomainError("csv: line " + std::to_string(lineno) + " is not numeric");
        }
        first = false;
        if (fields.empty()) continue;
        if (cols.empty()) cols.resize(fields.size());
        if (fields.size() != cols.size()) {
            throw DomainError("csv: line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(cols.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) cols[c].push_back(fields[c]);
    }
    return cols;
}

std::vector<std::vector<double>> read_columns_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_columns(in);
}

mc::EmpiricalCdf load_empirical(const std::string& path) {
    auto cols = read_columns_file(path);
    if (cols.empty() || cols[0].empty()) throw DomainError("'" + path + "' contains no data rows");
    if (cols.size() == 1) return mc::empirical_cdf(std::move(cols[0]));
    if (cols.size() == 2) return fit::empirical_from_pairs(std::move(cols[0]), std::move(cols[1]));
    throw DomainError("'" + path + "' must have one column (amplitudes) or two (amplitude, CDF)");
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != width_) throw std::logic_error("CsvWriter: row width does not match header");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    line += '\n';
    out_ << line;
}

}  // namespace gstwdp::io
