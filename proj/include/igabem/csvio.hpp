#ifndef IGABEM_CSVIO_HPP
#define IGABEM_CSVIO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "igabem/errors.hpp"

namespace igabem {

// Comma-separated output, '.' decimal point, 17 significant digits, one
// header row. Missing values become empty cells.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::optional<double>>& values) {
    char buf[40];
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      if (values[i] && std::isfinite(*values[i])) {
        std::snprintf(buf, sizeof buf, "%.17g", *values[i]);
        out_ << buf;
      }
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace igabem

#endif
