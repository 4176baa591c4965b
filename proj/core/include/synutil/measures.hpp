#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synutil/crosstab.hpp"

namespace synutil {

enum class MeasureId {
  pMSE,
  VW,
  G,
  FT,
  dBhatt,
  JSD,
  PO50,
  SPECKS,
  MabsDD,
  WMabsDD,
  U,
};

using MeasureSet = std::set<MeasureId>;

const std::string& measure_name(MeasureId id);
MeasureId parse_measure(const std::string& name);

// Every tabular measure.
const MeasureSet& all_measures();
// Measures defined for raw propensity-score vectors.
const MeasureSet& score_measures();
// Parses a comma list of measure names; "all" expands to `universe`.
MeasureSet parse_measure_set(const std::string& text, const MeasureSet& universe);

struct MeasureValue {
  double raw = 0.0;
  std::optional<double> null_expectation;  // analytic, when one exists
  std::optional<double> standardized;      // raw / null expectation
};

struct UtilityResult {
  std::map<MeasureId, MeasureValue> measures;
  std::size_t k = 0;    // occupied cells (tabular results)
  std::size_t dfG = 0;  // cells contributing to G
  std::optional<long> df;  // degrees of freedom used for standardization
  std::vector<std::string> vars;
};

// Compatibility switches for the two formula variants kept around for
// comparison with other implementations; defaults are the calibrated forms.
struct TabOptions {
  // G on the proportion scale (count scale divided by n2). The count scale is
  // the default because its null expectation is k-1.
  bool g_proportion_scale = false;
  // WMabsDD per-cell divisor sqrt(2c(o+s)/((1-c)pi)) instead of the default
  // sqrt(2c(o+s)/pi). The default calibrates to a mean of 1 per cell under a
  // correct synthesis; see docs/formats.md.
  bool wmabsdd_split_weight = false;
};

// Evaluates the requested measures on a cell table, attaching analytic null
// expectations and standardized ratios where they exist (pMSE, VW, G, FT,
// JSD, WMabsDD). df is k - 1, recomputed from the occupied cells.
UtilityResult tab_utility(const CellTable& table, const MeasureSet& measures,
                          const TabOptions& opts = {});

}  // namespace synutil
