#include "synutil/nullcal.hpp"

#include <cmath>

#include "synutil/errors.hpp"
#include "synutil/parallel.hpp"
#include "synutil/rng.hpp"

namespace synutil {

namespace {

NullEstimates summarize(const std::vector<std::map<MeasureId, double>>& replicates,
                        const MeasureSet& measures, NullMethod method) {
  NullEstimates out;
  for (MeasureId id : measures) {
    NullEstimate est;
    est.measure = id;
    est.method = method;
    est.replicates.reserve(replicates.size());
    for (const auto& rep : replicates) est.replicates.push_back(rep.at(id));
    double sum = 0.0;
    for (double v : est.replicates) sum += v;
    est.mean = sum / static_cast<double>(est.replicates.size());
    if (est.replicates.size() >= 2) {
      double ss = 0.0;
      for (double v : est.replicates) ss += (v - est.mean) * (v - est.mean);
      est.sd = std::sqrt(ss / static_cast<double>(est.replicates.size() - 1));
    }
    out[id] = est;
  }
  return out;
}

std::map<MeasureId, double> raw_values(const UtilityResult& res) {
  std::map<MeasureId, double> out;
  for (const auto& [id, mv] : res.measures) out[id] = mv.raw;
  return out;
}

}  // namespace

NullEstimates null_permutation(const DatasetPair& pair, const ModelSpec& model,
                               const MeasureSet& measures, int B, std::uint64_t seed) {
  if (B < 1) throw ContractError("null_permutation: B must be >= 1");
  for (MeasureId id : {MeasureId::SPECKS, MeasureId::PO50, MeasureId::U}) {
    if (measures.count(id)) {
      throw ContractError("the permutation null is invalid for " + measure_name(id) +
                          "; use the pairs method");
    }
  }
  const PreparedModel prepared = PreparedModel::prepare(pair, model);
  std::vector<std::map<MeasureId, double>> replicates(static_cast<std::size_t>(B));
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
    Rng rng(Rng::derive(seed, b));
    std::vector<std::uint8_t> labels = prepared.base_labels();
    rng.shuffle(labels);
    const PropensityScores scores = prepared.fit(labels, rng.next_u64());
    replicates[b] = raw_values(score_utility(scores, measures));
  });
  return summarize(replicates, measures, NullMethod::permutation);
}

NullEstimates null_pairs(const std::vector<Dataset>& syntheses, const ModelSpec& model,
                         const MeasureSet& measures, std::uint64_t seed) {
  const std::size_t m = syntheses.size();
  if (m < 2) throw ContractError("null_pairs: at least two syntheses are required");
  for (std::size_t i = 1; i < m; ++i) {
    if (!syntheses[0].same_schema(syntheses[i])) {
      throw ContractError("null_pairs: synthesis " + std::to_string(i) + " has a different schema");
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  index_pairs.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) index_pairs.emplace_back(i, j);
  }
  std::vector<std::map<MeasureId, double>> replicates(index_pairs.size());
  parallel_for(index_pairs.size(), [&](std::size_t p) {
    const auto [i, j] = index_pairs[p];
    // lower index plays "original"
    const DatasetPair dp = pair(syntheses[i], syntheses[j]);
    const PropensityScores scores = fit_model(dp, model, Rng::derive(seed, p));
    replicates[p] = raw_values(score_utility(scores, measures));
  });
  return summarize(replicates, measures, NullMethod::pairs);
}

double standardize(double observed, const NullEstimate& null_estimate) {
  if (!(null_estimate.mean > 0.0)) {
    throw ContractError("standardize: null mean for " + measure_name(null_estimate.measure) +
                        " is not positive");
  }
  return observed / null_estimate.mean;
}

}  // namespace synutil
