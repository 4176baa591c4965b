#include "synutil/crosstab.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "synutil/errors.hpp"

namespace synutil {

namespace {

// Per-variable radix: declared levels plus one slot for missing when allowed.
std::vector<std::uint64_t> radices(const Dataset& ds, const std::vector<std::size_t>& idx) {
  std::vector<std::uint64_t> r;
  r.reserve(idx.size());
  for (std::size_t v : idx) {
    const Variable& var = ds.variable(v);
    if (var.kind != VarKind::categorical) {
      throw ContractError("crosstab: variable '" + var.name +
                          "' is numeric; bin it before tabulating");
    }
    r.push_back(var.levels.size() + (var.allow_missing ? 1 : 0));
  }
  return r;
}

void accumulate(const Dataset& ds, const std::vector<std::size_t>& idx,
                const std::vector<std::uint64_t>& radix,
                std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int64_t>>& counts,
                bool synthetic) {
  const std::size_t n = ds.n_rows();
  for (std::size_t r = 0; r < n; ++r) {
    std::uint64_t cell = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const std::int32_t code = ds.column(idx[j]).codes[r];
      // missing (-1) sorts after the declared levels
      const std::uint64_t digit =
          code >= 0 ? static_cast<std::uint64_t>(code) : radix[j] - 1;
      cell = cell * radix[j] + digit;
    }
    auto& slot = counts[cell];
    if (synthetic) ++slot.second;
    else ++slot.first;
  }
}

}  // namespace

CellTable crosstab(const DatasetPair& pair, const std::vector<std::string>& vars) {
  if (vars.empty()) throw ContractError("crosstab: empty variable list");
  std::vector<std::size_t> idx;
  idx.reserve(vars.size());
  for (const auto& name : vars) idx.push_back(pair.original.var_index(name));

  const std::vector<std::uint64_t> radix = radices(pair.original, idx);
  double log_cells = 0.0;
  for (std::uint64_t r : radix) log_cells += std::log2(static_cast<double>(r));
  if (log_cells >= 63.0) {
    throw ContractError("crosstab: cross-tabulation too large to index");
  }

  std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> counts;
  counts.reserve(pair.N);
  accumulate(pair.original, idx, radix, counts, /*synthetic=*/false);
  accumulate(pair.synthetic, idx, radix, counts, /*synthetic=*/true);

  CellTable table;
  table.cells.reserve(counts.size());
  for (const auto& [cell, os] : counts) {
    table.cells.push_back(Cell{cell, os.first, os.second});
  }
  std::sort(table.cells.begin(), table.cells.end(),
            [](const Cell& a, const Cell& b) { return a.index < b.index; });

  table.k = table.cells.size();
  for (const Cell& cell : table.cells) {
    if (cell.o > 0 && cell.s > 0) ++table.dfG;
  }
  table.n1 = static_cast<std::int64_t>(pair.n1);
  table.n2 = static_cast<std::int64_t>(pair.n2);
  table.N = static_cast<std::int64_t>(pair.N);
  table.c = pair.c;
  table.vars = vars;
  return table;
}

CellTable table_from_counts(const std::vector<std::int64_t>& o,
                            const std::vector<std::int64_t>& s) {
  if (o.size() != s.size()) throw ContractError("table_from_counts: length mismatch");
  CellTable table;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  for (std::size_t j = 0; j < o.size(); ++j) {
    if (o[j] < 0 || s[j] < 0) throw ContractError("table_from_counts: negative count");
    if (o[j] + s[j] == 0) continue;
    table.cells.push_back(Cell{static_cast<std::uint64_t>(j), o[j], s[j]});
    n1 += o[j];
    n2 += s[j];
    if (o[j] > 0 && s[j] > 0) ++table.dfG;
  }
  if (table.cells.empty()) throw ContractError("table_from_counts: no occupied cells");
  table.k = table.cells.size();
  table.n1 = n1;
  table.n2 = n2;
  table.N = n1 + n2;
  table.c = static_cast<double>(n2) / static_cast<double>(table.N);
  return table;
}

}  // namespace synutil
