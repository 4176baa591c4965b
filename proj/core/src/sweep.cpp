#include "synutil/sweep.hpp"

#include <algorithm>
#include <functional>

#include "synutil/crosstab.hpp"
#include "synutil/errors.hpp"
#include "synutil/parallel.hpp"

namespace synutil {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

SweepResult sweep(const DatasetPair& pair, int arity, const MeasureSet& measures,
                  const BinningSpec& binning, const TabOptions& opts) {
  if (arity < 1 || arity > 3) throw ContractError("sweep: arity must be 1, 2 or 3");
  const std::size_t nvars = pair.original.n_vars();
  if (nvars < static_cast<std::size_t>(arity)) {
    throw ContractError("sweep: fewer variables than the requested arity");
  }

  const DatasetPair binned = bin_pair(pair, binning);

  std::vector<std::vector<std::string>> combos;
  std::vector<std::size_t> pick(static_cast<std::size_t>(arity));
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == pick.size()) {
      std::vector<std::string> names;
      names.reserve(pick.size());
      for (std::size_t v : pick) names.push_back(binned.original.variable(v).name);
      combos.push_back(std::move(names));
      return;
    }
    for (std::size_t v = start; v + (pick.size() - depth) <= nvars; ++v) {
      pick[depth] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);

  SweepResult result;
  result.arity = arity;
  result.entries.resize(combos.size());
  parallel_for(combos.size(), [&](std::size_t i) {
    const CellTable table = crosstab(binned, combos[i]);
    result.entries[i] = SweepEntry{combos[i], tab_utility(table, measures, opts)};
  });

  for (MeasureId id : measures) {
    std::vector<double> raw;
    std::vector<double> std_vals;
    raw.reserve(result.entries.size());
    for (const auto& entry : result.entries) {
      const MeasureValue& mv = entry.result.measures.at(id);
      raw.push_back(mv.raw);
      if (mv.standardized) std_vals.push_back(*mv.standardized);
    }
    MeasureSummary summary;
    summary.median_raw = median_of(raw);
    summary.max_raw = *std::max_element(raw.begin(), raw.end());
    if (std_vals.size() == result.entries.size()) {
      summary.median_standardized = median_of(std_vals);
      summary.max_standardized = *std::max_element(std_vals.begin(), std_vals.end());
    }
    result.summary[id] = summary;
  }
  std::vector<double> dfs;
  dfs.reserve(result.entries.size());
  for (const auto& entry : result.entries) {
    dfs.push_back(static_cast<double>(entry.result.df.value_or(0)));
  }
  result.median_df = median_of(dfs);
  result.max_df = *std::max_element(dfs.begin(), dfs.end());
  return result;
}

namespace {

double standardized_or_raw(const UtilityResult& res, MeasureId by) {
  const auto it = res.measures.find(by);
  if (it == res.measures.end()) {
    throw ContractError("sweep entry is missing measure " + measure_name(by));
  }
  return it->second.standardized.value_or(it->second.raw);
}

}  // namespace

std::vector<std::pair<std::vector<std::string>, double>> worst_n(const SweepResult& result,
                                                                 std::size_t n, MeasureId by) {
  if (n < 1) throw ContractError("worst_n: n must be >= 1");
  std::vector<std::pair<std::vector<std::string>, double>> ranked;
  ranked.reserve(result.entries.size());
  for (const auto& entry : result.entries) {
    ranked.emplace_back(entry.vars, standardized_or_raw(entry.result, by));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

std::string pick_fixed_var(const SweepResult& result, MeasureId by) {
  if (result.arity != 3) throw ContractError("pick_fixed_var: requires a three-way sweep");
  std::map<std::string, double> worst;
  for (const auto& entry : result.entries) {
    const double value = standardized_or_raw(entry.result, by);
    for (const auto& var : entry.vars) {
      auto [it, inserted] = worst.emplace(var, value);
      if (!inserted && value > it->second) it->second = value;
    }
  }
  // std::map iterates names in lexicographic order, so strictly-greater picks
  // the lexicographically first name on ties
  std::string best_var;
  double best = -1.0;
  for (const auto& [var, value] : worst) {
    if (value > best) {
      best = value;
      best_var = var;
    }
  }
  return best_var;
}

}  // namespace synutil
