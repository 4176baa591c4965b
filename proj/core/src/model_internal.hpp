#pragma once

// Internal feature layout shared by the CART grower and the prepared-model
// refitting path (permutation nulls refit against many label vectors).

#include <cstdint>
#include <vector>

#include "synutil/dataset.hpp"
#include "synutil/propensity.hpp"

namespace synutil::detail {

struct NumericKey {
  std::uint8_t cls = 0;  // 0 missing, 1+i special code i, 255 present value
  double value = 0.0;

  friend bool operator<(const NumericKey& a, const NumericKey& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    return a.value < b.value;
  }
  friend bool operator==(const NumericKey& a, const NumericKey& b) {
    return a.cls == b.cls && a.value == b.value;
  }
};

struct CombinedFeatures {
  std::size_t n_records = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  // per variable, one of:
  struct Feature {
    bool categorical = true;
    std::vector<std::int32_t> codes;    // categorical; missing mapped to n_levels-1
    std::int32_t n_levels = 0;          // effective level count (missing slot included)
    std::vector<NumericKey> keys;       // numeric ordering keys
  };
  std::vector<Feature> features;
};

CombinedFeatures build_combined(const DatasetPair& pair);

PropensityScores cart_grow(const CombinedFeatures& data, const std::vector<std::uint8_t>& labels,
                           const CartParams& params);

}  // namespace synutil::detail
