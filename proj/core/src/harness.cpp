#include "synutil/harness.hpp"

#include <algorithm>
#include <cmath>

#include "synutil/crosstab.hpp"
#include "synutil/errors.hpp"
#include "synutil/nullcal.hpp"
#include "synutil/parallel.hpp"
#include "synutil/propensity.hpp"
#include "synutil/rng.hpp"

namespace synutil {

namespace {

void require_categorical(const Dataset& ds, const char* who) {
  for (const auto& var : ds.variables()) {
    if (var.kind != VarKind::categorical) {
      throw ContractError(std::string(who) + ": variable '" + var.name +
                          "' is numeric; bin the data first");
    }
  }
}

long lower_median(std::vector<long> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

}  // namespace

std::vector<Dataset> synth_catall(const Dataset& ds, int m, std::uint64_t seed) {
  require_categorical(ds, "synth_catall");
  if (m < 1) throw ContractError("synth_catall: m must be >= 1");
  const std::size_t n = ds.n_rows();
  if (n == 0) throw ContractError("synth_catall: empty dataset");
  std::vector<Dataset> out(static_cast<std::size_t>(m));
  parallel_for(out.size(), [&](std::size_t rep) {
    Rng rng(Rng::derive(seed, rep));
    std::vector<std::size_t> rows(n);
    for (std::size_t r = 0; r < n; ++r) rows[r] = rng.index(n);
    std::vector<Column> cols(ds.n_vars());
    for (std::size_t v = 0; v < ds.n_vars(); ++v) {
      cols[v].codes.reserve(n);
      const Column& src = ds.column(v);
      for (std::size_t r = 0; r < n; ++r) cols[v].codes.push_back(src.codes[rows[r]]);
    }
    out[rep] = Dataset(ds.variables(), std::move(cols));
  });
  return out;
}

std::vector<Dataset> synth_sample(const Dataset& ds, int m, std::uint64_t seed) {
  require_categorical(ds, "synth_sample");
  if (m < 1) throw ContractError("synth_sample: m must be >= 1");
  const std::size_t n = ds.n_rows();
  if (n == 0) throw ContractError("synth_sample: empty dataset");
  std::vector<Dataset> out(static_cast<std::size_t>(m));
  parallel_for(out.size(), [&](std::size_t rep) {
    Rng rng(Rng::derive(seed, rep));
    std::vector<Column> cols(ds.n_vars());
    for (std::size_t v = 0; v < ds.n_vars(); ++v) {
      cols[v].codes.reserve(n);
      const Column& src = ds.column(v);
      for (std::size_t r = 0; r < n; ++r) cols[v].codes.push_back(src.codes[rng.index(n)]);
    }
    out[rep] = Dataset(ds.variables(), std::move(cols));
  });
  return out;
}

PowerReport power_sim(const Dataset& ds, int nvars, int m, const MeasureSet& measures,
                      std::uint64_t seed) {
  if (nvars < 1 || static_cast<std::size_t>(nvars) > ds.n_vars()) {
    throw ContractError("power_sim: nvars out of range");
  }
  if (m < 2) throw ContractError("power_sim: m must be >= 2");
  require_categorical(ds, "power_sim");

  const Dataset subset = ds.head_vars(static_cast<std::size_t>(nvars));
  std::vector<std::string> var_names;
  for (const auto& v : subset.variables()) var_names.push_back(v.name);

  // bad syntheses come from the full dataset, good ones from the subset; the
  // shared seed mirrors how the two streams are coupled in the study design
  const std::vector<Dataset> bad_full = synth_sample(ds, m, seed);
  const std::vector<Dataset> good = synth_catall(subset, m, seed);

  struct RepResult {
    std::map<MeasureId, double> good_vals, bad_vals;
    long df_good = 0, dfG_good = 0, df_bad = 0, dfG_bad = 0;
  };
  std::vector<RepResult> reps(static_cast<std::size_t>(m));
  parallel_for(reps.size(), [&](std::size_t rep) {
    RepResult& out = reps[rep];
    {
      const DatasetPair p = pair(subset, good[rep]);
      const CellTable table = crosstab(p, var_names);
      const UtilityResult res = tab_utility(table, measures);
      for (const auto& [id, mv] : res.measures) out.good_vals[id] = mv.raw;
      out.df_good = static_cast<long>(table.k) - 1;
      out.dfG_good = static_cast<long>(table.dfG);
    }
    {
      const DatasetPair p = pair(subset, bad_full[rep].select(var_names));
      const CellTable table = crosstab(p, var_names);
      const UtilityResult res = tab_utility(table, measures);
      for (const auto& [id, mv] : res.measures) out.bad_vals[id] = mv.raw;
      out.df_bad = static_cast<long>(table.k) - 1;
      out.dfG_bad = static_cast<long>(table.dfG);
    }
  });

  PowerReport report;
  report.m = m;
  report.nvars = nvars;
  for (MeasureId id : measures) {
    double mean_good = 0.0;
    double mean_bad = 0.0;
    for (const auto& rep : reps) {
      mean_good += rep.good_vals.at(id);
      mean_bad += rep.bad_vals.at(id);
    }
    mean_good /= m;
    mean_bad /= m;
    double ss = 0.0;
    for (const auto& rep : reps) {
      const double d = rep.good_vals.at(id) - mean_good;
      ss += d * d;
    }
    const double sd_good = std::sqrt(ss / (m - 1));
    report.mean_good[id] = mean_good;
    report.mean_bad[id] = mean_bad;
    report.power[id] = sd_good > 0.0
                           ? std::optional<double>((mean_bad - mean_good) / sd_good)
                           : std::nullopt;
  }
  std::vector<long> df_good, dfG_good, df_bad, dfG_bad;
  for (const auto& rep : reps) {
    df_good.push_back(rep.df_good);
    dfG_good.push_back(rep.dfG_good);
    df_bad.push_back(rep.df_bad);
    dfG_bad.push_back(rep.dfG_bad);
  }
  report.median_df_good = lower_median(df_good);
  report.median_dfG_good = lower_median(dfG_good);
  report.median_df_bad = lower_median(df_bad);
  report.median_dfG_bad = lower_median(dfG_bad);
  return report;
}

CalibrationReport calibration_sim(const Dataset& ds, int nvars, int m, std::uint64_t seed,
                                  const CalibrationOptions& opts) {
  if (nvars < 1 || static_cast<std::size_t>(nvars) > ds.n_vars()) {
    throw ContractError("calibration_sim: nvars out of range");
  }
  if (m < 1) throw ContractError("calibration_sim: m must be >= 1");
  require_categorical(ds, "calibration_sim");

  const Dataset subset = ds.head_vars(static_cast<std::size_t>(nvars));
  std::vector<std::string> var_names;
  for (const auto& v : subset.variables()) var_names.push_back(v.name);

  const MeasureSet analytic = {MeasureId::pMSE, MeasureId::FT, MeasureId::JSD,
                               MeasureId::WMabsDD, MeasureId::G};
  const std::vector<Dataset> good = synth_catall(subset, m, seed);
  std::vector<std::map<MeasureId, double>> svals(static_cast<std::size_t>(m));
  parallel_for(svals.size(), [&](std::size_t rep) {
    const DatasetPair p = pair(subset, good[rep]);
    const UtilityResult res = tab_utility(crosstab(p, var_names), analytic);
    for (const auto& [id, mv] : res.measures) {
      svals[rep][id] = mv.standardized.value();
    }
  });

  CalibrationReport report;
  report.m = m;
  report.nvars = nvars;
  for (MeasureId id : analytic) {
    double sum = 0.0;
    for (const auto& rep : svals) sum += rep.at(id);
    report.mean_standardized[id] = sum / m;
  }

  const ModelSpec cart = ModelSpec::cart_model();
  if (opts.with_permutation) {
    // observed-vs-permutation ratio per synthesis, averaged
    const int count = opts.permutation_syntheses;
    const std::vector<Dataset> syn = synth_catall(subset, count, Rng::derive(seed, 1000001));
    std::vector<double> ratios(static_cast<std::size_t>(count));
    parallel_for(ratios.size(), [&](std::size_t i) {
      const DatasetPair p = pair(subset, syn[i]);
      const PropensityScores scores = fit_model(p, cart, Rng::derive(seed, 2000000 + i));
      const double observed =
          score_utility(scores, {MeasureId::pMSE}).measures.at(MeasureId::pMSE).raw;
      const NullEstimates nulls = null_permutation(p, cart, {MeasureId::pMSE},
                                                   opts.permutation_B, Rng::derive(seed, 3000000 + i));
      ratios[i] = standardize(observed, nulls.at(MeasureId::pMSE));
    });
    double sum = 0.0;
    for (double r : ratios) sum += r;
    report.perm_S_pMSE = sum / count;
  }
  if (opts.with_pairs) {
    const std::vector<Dataset> syn = synth_catall(subset, opts.pairs_m, Rng::derive(seed, 4000001));
    const MeasureSet wanted = {MeasureId::pMSE, MeasureId::SPECKS, MeasureId::U};
    const NullEstimates nulls = null_pairs(syn, cart, wanted, Rng::derive(seed, 5000001));
    std::vector<std::map<MeasureId, double>> observed(syn.size());
    parallel_for(syn.size(), [&](std::size_t i) {
      const DatasetPair p = pair(subset, syn[i]);
      const PropensityScores scores = fit_model(p, cart, Rng::derive(seed, 6000000 + i));
      const UtilityResult res = score_utility(scores, wanted);
      for (const auto& [id, mv] : res.measures) observed[i][id] = mv.raw;
    });
    auto mean_ratio = [&](MeasureId id) {
      double sum = 0.0;
      for (const auto& obs : observed) sum += standardize(obs.at(id), nulls.at(id));
      return sum / static_cast<double>(observed.size());
    };
    report.pairs_S_pMSE = mean_ratio(MeasureId::pMSE);
    report.pairs_S_SPECKS = mean_ratio(MeasureId::SPECKS);
    report.pairs_S_U = mean_ratio(MeasureId::U);
  }
  return report;
}

}  // namespace synutil
