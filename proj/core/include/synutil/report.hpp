#pragma once

#include <string>
#include <vector>

#include "synutil/harness.hpp"
#include "synutil/measures.hpp"
#include "synutil/nullcal.hpp"
#include "synutil/propensity.hpp"
#include "synutil/sweep.hpp"

namespace synutil {

// Fills in null_expectation/standardized from resampled estimates for the
// measures that have no analytic null attached.
void apply_null(UtilityResult& result, const NullEstimates& nulls);

// JSON report bodies. Keys are emitted in sorted order and numbers in
// shortest round-trip form, so identical inputs give identical bytes.
std::string report_utility(const UtilityResult& result, const PropensityScores* model,
                           const NullEstimates* nulls, bool keep_replicates);
std::string report_sweep(const SweepResult& sweep,
                         const std::vector<std::pair<std::vector<std::string>, double>>* worst,
                         MeasureId worst_by);
std::string report_power(const std::vector<PowerReport>& power,
                         const std::vector<CalibrationReport>& calibration);

// Aligned plain-text tables for terminal output.
std::string text_compare_table(const SweepResult& arity1);
std::string text_power_table(const std::vector<PowerReport>& rows);
std::string text_calibration_table(const std::vector<CalibrationReport>& rows);

}  // namespace synutil
