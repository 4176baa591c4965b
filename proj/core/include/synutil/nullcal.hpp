#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "synutil/dataset.hpp"
#include "synutil/measures.hpp"
#include "synutil/propensity.hpp"

namespace synutil {

enum class NullMethod { permutation, pairs };

// Resampled estimate of a measure's null distribution.
struct NullEstimate {
  MeasureId measure = MeasureId::pMSE;
  NullMethod method = NullMethod::permutation;
  std::vector<double> replicates;
  double mean = 0.0;
  std::optional<double> sd;  // n-1 denominator; absent with fewer than 2 replicates
};

using NullEstimates = std::map<MeasureId, NullEstimate>;

// Permutation null: per replicate, the source labels are shuffled over the
// combined records and the model refit. Valid for pMSE only; SPECKS, PO50 and
// U are rejected (their permutation nulls are meaningless because refitting
// against true labels orders the score CDFs). Replicate b draws from a stream
// derived from (seed, b), so results do not depend on execution order.
NullEstimates null_permutation(const DatasetPair& pair, const ModelSpec& model,
                               const MeasureSet& measures, int B, std::uint64_t seed);

// Pairs null: every unordered pair of the m syntheses is scored with the
// lower-indexed member playing "original". Any score measure is allowed.
NullEstimates null_pairs(const std::vector<Dataset>& syntheses, const ModelSpec& model,
                         const MeasureSet& measures, std::uint64_t seed);

// observed / mean(null); ContractError when the null mean is not positive.
double standardize(double observed, const NullEstimate& null_estimate);

}  // namespace synutil
