#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synutil/dataset.hpp"

namespace synutil {

struct Cell {
  std::uint64_t index = 0;  // mixed-radix cell coordinate, first variable most significant
  std::int64_t o = 0;       // original count
  std::int64_t s = 0;       // synthetic count
};

// Aligned original/synthetic counts over the occupied cells of a
// cross-tabulation. Only cells with o + s > 0 are stored.
struct CellTable {
  std::vector<Cell> cells;
  std::size_t k = 0;     // occupied cells
  std::size_t dfG = 0;   // cells with both o > 0 and s > 0
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t N = 0;
  double c = 0.0;        // n2 / N
  std::vector<std::string> vars;

  // Propensity score of a cell: s / (o + s).
  static double phat(const Cell& cell) {
    return static_cast<double>(cell.s) / static_cast<double>(cell.o + cell.s);
  }
};

// Tabulates the pair over the named variables (all must be categorical; bin
// numerics first). Cells are ordered lexicographically in level indices, with
// a missing value sorting after the declared levels of its variable.
CellTable crosstab(const DatasetPair& pair, const std::vector<std::string>& vars);

// Builds a table directly from aligned count vectors (n1, n2 are the sums).
// Used by generators and tests that do not go through datasets.
CellTable table_from_counts(const std::vector<std::int64_t>& o,
                            const std::vector<std::int64_t>& s);

}  // namespace synutil
