#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synutil/dataset.hpp"
#include "synutil/measures.hpp"

namespace synutil {

// Toy synthesizers used by the power and calibration studies. Both require
// fully categorical data (bin numerics first).

// Complete-row bootstrap: a saturated generative model of the full
// cross-tabulation ("correct" synthesis). Preserves the joint support.
std::vector<Dataset> synth_catall(const Dataset& ds, int m, std::uint64_t seed);

// Independent per-column bootstrap: preserves each marginal but destroys all
// inter-variable structure ("incorrect" synthesis).
std::vector<Dataset> synth_sample(const Dataset& ds, int m, std::uint64_t seed);

struct PowerReport {
  // power = (mean_bad - mean_good) / sd_good; absent when sd_good == 0
  std::map<MeasureId, std::optional<double>> power;
  std::map<MeasureId, double> mean_good;
  std::map<MeasureId, double> mean_bad;
  long median_df_good = 0;   // lower median of per-synthesis k-1
  long median_dfG_good = 0;
  long median_df_bad = 0;
  long median_dfG_bad = 0;
  int m = 0;
  int nvars = 0;
};

// Appendix-style power study on the first `nvars` variables: m "catall"
// (good) and m "sample" (bad) syntheses, the bad ones drawn from the full
// dataset with the same seed, each scored by tab_utility on the full
// nvars-way table.
PowerReport power_sim(const Dataset& ds, int nvars, int m, const MeasureSet& measures,
                      std::uint64_t seed);

struct CalibrationOptions {
  // Table-6 style resampled columns (CART model); disabled by default.
  bool with_permutation = false;
  int permutation_B = 50;
  int permutation_syntheses = 100;
  bool with_pairs = false;
  int pairs_m = 16;
};

struct CalibrationReport {
  // mean standardized value over m correct syntheses, analytic nulls
  std::map<MeasureId, double> mean_standardized;
  std::optional<double> perm_S_pMSE;
  std::optional<double> pairs_S_pMSE;
  std::optional<double> pairs_S_SPECKS;
  std::optional<double> pairs_S_U;
  int m = 0;
  int nvars = 0;
};

// Mean standardized utility for correct syntheses: S_pMSE, S_FT, S_JSD,
// S_WMabsDD, S_G from analytic nulls, plus optional permutation/pairs
// columns.
CalibrationReport calibration_sim(const Dataset& ds, int nvars, int m, std::uint64_t seed,
                                  const CalibrationOptions& opts = {});

}  // namespace synutil
