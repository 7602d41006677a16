#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgopt/types.hpp"

namespace fgopt {

/// Per-iteration record stream of a run: an integer iteration index followed
/// by a fixed set of named scalar columns. The column schema is declared up
/// front and stays stable for the lifetime of the trace.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return t_.size(); }

  void add_row(std::int64_t t, const std::vector<double>& values) {
    if (values.size() != columns_.size())
      throw std::invalid_argument("Trace::add_row: value count does not match schema");
    if (!t_.empty() && t <= t_.back())
      throw std::invalid_argument("Trace::add_row: iteration indices must be strictly increasing");
    t_.push_back(t);
    values_.insert(values_.end(), values.begin(), values.end());
  }

  std::int64_t iteration(std::size_t row) const { return t_.at(row); }

  double value(std::size_t row, std::size_t col) const { return values_.at(row * columns_.size() + col); }

  double value(std::size_t row, const std::string& column) const { return value(row, column_index(column)); }

  std::size_t column_index(const std::string& column) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == column) return i;
    throw std::invalid_argument("Trace: unknown column '" + column + "'");
  }

  /// Last recorded value of a column.
  double back(const std::string& column) const {
    if (t_.empty()) throw std::runtime_error("Trace is empty");
    return value(t_.size() - 1, column);
  }

  std::vector<double> column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out(t_.size());
    for (std::size_t r = 0; r < t_.size(); ++r) out[r] = value(r, c);
    return out;
  }

  // Run metadata (seed, config digest, warnings) carried alongside the rows.
  std::uint64_t seed = 0;
  std::string config_digest;
  std::vector<std::string> warnings;

  /// CSV with a header row; decimal text with 17 significant digits.
  void write_csv(std::ostream& os) const {
    os << "t";
    for (const auto& c : columns_) os << "," << c;
    os << "\n";
    char buf[64];
    for (std::size_t r = 0; r < t_.size(); ++r) {
      os << t_[r];
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", value(r, c));
        os << "," << buf;
      }
      os << "\n";
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::int64_t> t_;
  std::vector<double> values_;  // row-major
};

}  // namespace fgopt
