#include <algorithm>
#include <functional>

#include "synutil/errors.hpp"
#include "synutil/propensity.hpp"

namespace synutil {

namespace {

// One elementary design column for a single variable.
struct Component {
  std::string name;
  // evaluation: kind 0 = categorical level dummy, 1 = numeric value,
  // 2 = numeric special-code dummy, 3 = missing dummy
  int kind = 0;
  std::size_t var = 0;
  std::int32_t level = 0;   // kind 0
  std::uint8_t tag = 0;     // kind 2: full tag value (kSpecialBase + index)

  double eval(const Dataset& ds, std::size_t row) const {
    const Column& col = ds.column(var);
    switch (kind) {
      case 0: return col.codes[row] == level ? 1.0 : 0.0;
      case 1: return col.tags[row] == kPresent ? col.values[row] : 0.0;
      case 2: return col.tags[row] == tag ? 1.0 : 0.0;
      default: {
        const Variable& v = ds.variable(var);
        if (v.kind == VarKind::categorical) return col.codes[row] == -1 ? 1.0 : 0.0;
        return col.tags[row] == kMissing ? 1.0 : 0.0;
      }
    }
  }
};

std::vector<Component> components_for(const Dataset& ds, std::size_t v) {
  const Variable& var = ds.variable(v);
  std::vector<Component> out;
  if (var.kind == VarKind::categorical) {
    for (std::size_t l = 1; l < var.levels.size(); ++l) {
      out.push_back({var.name + "=" + var.levels[l], 0, v, static_cast<std::int32_t>(l), 0});
    }
  } else {
    out.push_back({var.name, 1, v, 0, 0});
    for (std::size_t s = 0; s < var.special_codes.size(); ++s) {
      out.push_back({var.name + "=code:" + format_double(var.special_codes[s]), 2, v, 0,
                     static_cast<std::uint8_t>(kSpecialBase + s)});
    }
  }
  if (var.allow_missing) {
    out.push_back({var.name + "=missing", 3, v, 0, 0});
  }
  return out;
}

void subsets_of_size(std::size_t nvars, std::size_t size,
                     std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(size);
  // lexicographic enumeration of index subsets
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == size) {
      out.push_back(cur);
      return;
    }
    for (std::size_t v = start; v + (size - depth) <= nvars; ++v) {
      cur[depth] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

DesignMatrix build_design(const DatasetPair& pair, int order) {
  if (order < 1) throw ContractError("build_design: order must be >= 1");
  const std::size_t nvars = pair.original.n_vars();
  if (static_cast<std::size_t>(order) > nvars) {
    throw ContractError("build_design: order " + std::to_string(order) + " exceeds the " +
                        std::to_string(nvars) + " variables");
  }

  std::vector<std::vector<Component>> per_var(nvars);
  for (std::size_t v = 0; v < nvars; ++v) per_var[v] = components_for(pair.original, v);

  // a term is one component chosen for each variable of a subset
  struct Term {
    std::vector<const Component*> parts;
    std::string name;
  };
  std::vector<Term> terms;
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 1; size <= static_cast<std::size_t>(order); ++size) {
    subsets.clear();
    subsets_of_size(nvars, size, subsets);
    for (const auto& subset : subsets) {
      // product over the subset; the last variable's component varies fastest
      std::vector<std::size_t> pick(size, 0);
      for (;;) {
        Term term;
        term.parts.reserve(size);
        for (std::size_t d = 0; d < size; ++d) {
          term.parts.push_back(&per_var[subset[d]][pick[d]]);
        }
        for (std::size_t d = 0; d < size; ++d) {
          if (d) term.name += ":";
          term.name += term.parts[d]->name;
        }
        terms.push_back(std::move(term));
        std::size_t d = size;
        while (d > 0) {
          --d;
          if (++pick[d] < per_var[subset[d]].size()) break;
          pick[d] = 0;
          if (d == 0) goto subset_done;
        }
      }
    subset_done:;
    }
  }

  DesignMatrix design;
  design.rows = pair.N;
  design.cols = 1 + terms.size();
  design.column_names.reserve(design.cols);
  design.column_names.push_back("(intercept)");
  for (const auto& term : terms) design.column_names.push_back(term.name);
  design.data.assign(design.rows * design.cols, 0.0);

  auto fill_block = [&](const Dataset& ds, std::size_t row_offset) {
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
      double* out = design.data.data() + (row_offset + r) * design.cols;
      out[0] = 1.0;
      for (std::size_t tix = 0; tix < terms.size(); ++tix) {
        double prod = 1.0;
        for (const Component* part : terms[tix].parts) {
          prod *= part->eval(ds, r);
          if (prod == 0.0) break;
        }
        out[1 + tix] = prod;
      }
    }
  };
  fill_block(pair.original, 0);
  fill_block(pair.synthetic, pair.n1);
  return design;
}

}  // namespace synutil
