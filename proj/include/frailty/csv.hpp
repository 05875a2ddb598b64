#pragma once

#include <stdexcept>
#include <string>

#include "frailty/data.hpp"

namespace frailty {

// Malformed input; `line` is the 1-based physical line in the file
// (0 for file-level problems) and `row` the 1-based data row.
struct CsvError : std::runtime_error {
  CsvError(std::string msg, int line_, int row_)
      : std::runtime_error(std::move(msg)), line(line_), row(row_) {}
  int line;
  int row;
};

// Reads `cluster,time,status,x1,...,xp`.  Cluster labels are arbitrary
// tokens, reindexed densely in first-appearance order.
ClusteredSurvivalData load_csv(const std::string& path);

// Writes the same layout with dense cluster ids and round-trip-exact doubles.
void write_csv(const ClusteredSurvivalData& data, const std::string& path);

}  // namespace frailty
