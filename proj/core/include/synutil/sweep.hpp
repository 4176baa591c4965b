#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synutil/dataset.hpp"
#include "synutil/measures.hpp"

namespace synutil {

struct SweepEntry {
  std::vector<std::string> vars;
  UtilityResult result;
};

struct MeasureSummary {
  double median_raw = 0.0;
  double max_raw = 0.0;
  std::optional<double> median_standardized;
  std::optional<double> max_standardized;
};

struct SweepResult {
  int arity = 0;
  std::vector<SweepEntry> entries;  // combinations in lexicographic order
  std::map<MeasureId, MeasureSummary> summary;
  double median_df = 0.0;  // midpoint-of-two rule
  double max_df = 0.0;
  std::optional<std::string> fixed_var;  // three-way display variable
};

// Evaluates the requested measures on every `arity`-way cross-tabulation of
// the pair's variables (numerics are quantile-binned first with `binning`).
SweepResult sweep(const DatasetPair& pair, int arity, const MeasureSet& measures,
                  const BinningSpec& binning, const TabOptions& opts = {});

// Combinations with the worst (largest) standardized values of `by`, sorted
// descending; ties break lexicographically on the variable names. n is
// clipped to the entry count.
std::vector<std::pair<std::vector<std::string>, double>> worst_n(const SweepResult& result,
                                                                 std::size_t n,
                                                                 MeasureId by = MeasureId::pMSE);

// For a three-way sweep: the variable whose worst table is worst overall,
// i.e. argmax over variables of the max standardized value among entries
// containing the variable. Ties go to the lexicographically first name.
std::string pick_fixed_var(const SweepResult& result, MeasureId by = MeasureId::pMSE);

// Projects a three-way sweep onto the pairs of variables tabulated together
// with `fixed`; the result renders like a two-way sweep.
SweepResult fix_third_var(const SweepResult& result, const std::string& fixed);

// Lower-triangular pair grid as an SVG 1.1 document. Cell color maps the
// standardized value of `by` onto a fixed 9-step ramp from 0 to max_scale
// (values above clamp to the top color); omitted max_scale uses the largest
// entry. Output is byte-deterministic.
std::string render_heatmap(const SweepResult& result, std::optional<double> max_scale,
                           const std::string& title, MeasureId by = MeasureId::pMSE);

}  // namespace synutil
