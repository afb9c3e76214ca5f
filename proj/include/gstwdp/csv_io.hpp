#pragma once

// Locale-independent CSV reading and writing.  Numbers are written in the
// shortest form that round-trips (std::to_chars).

#include "gstwdp/montecarlo.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gstwdp::io {

std::string format_double(double v);

/// Numeric columns of a CSV file.  A first line that does not parse as
/// numbers is taken as a header; blank lines and lines starting with '#' are
/// skipped; commas, semicolons and whitespace all separate fields.
std::vector<std::vector<double>> read_columns(std::istream& in);
std::vector<std::vector<double>> read_columns_file(const std::string& path);

/// One column: raw amplitudes.  Two columns: (amplitude, empirical CDF).
mc::EmpiricalCdf load_empirical(const std::string& path);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace gstwdp::io
