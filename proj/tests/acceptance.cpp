// Acceptance suite: prints one PASS/FAIL line per criterion (plus timing) and
// exits nonzero if any criterion fails. Criteria run on the bundled fixtures
// under data/ and on the installed CLI binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "synutil/crosstab.hpp"
#include "synutil/dataset.hpp"
#include "synutil/errors.hpp"
#include "synutil/harness.hpp"
#include "synutil/measures.hpp"
#include "synutil/nullcal.hpp"
#include "synutil/propensity.hpp"
#include "synutil/rng.hpp"
#include "synutil/sweep.hpp"

using namespace synutil;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string label)
      : number_(number), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& detail) {
    if (!ok) {
      failed_ = true;
      details_.push_back(detail);
    }
  }

  void finish(double budget_seconds) {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    if (elapsed.count() > budget_seconds) {
      failed_ = true;
      details_.push_back("runtime " + std::to_string(elapsed.count()) + "s over budget " +
                         std::to_string(budget_seconds) + "s");
    }
    std::printf("%s criterion %d: %s (%.1fs)\n", failed_ ? "FAIL" : "PASS", number_,
                label_.c_str(), elapsed.count());
    for (const auto& d : details_) std::printf("     - %s\n", d.c_str());
    if (failed_) ++g_failures;
  }

 private:
  int number_;
  std::string label_;
  std::chrono::steady_clock::time_point start_;
  bool failed_ = false;
  std::vector<std::string> details_;
};

std::string data_path(const std::string& name) {
  return std::string(SYNUTIL_TEST_DATA_DIR) + "/" + name;
}

Dataset load_fixture(const std::string& csv, const std::string& meta) {
  return load_csv(data_path(csv), load_metadata(data_path(meta)));
}

double raw(const UtilityResult& r, MeasureId id) { return r.measures.at(id).raw; }

CellTable random_table(Rng& rng, bool equal_n) {
  const std::size_t k = 2 + rng.index(49);
  std::vector<std::int64_t> o(k), s(k);
  for (;;) {
    for (std::size_t j = 0; j < k; ++j) {
      o[j] = static_cast<std::int64_t>(rng.index(41));
      s[j] = static_cast<std::int64_t>(rng.index(41));
      if (o[j] + s[j] == 0) s[j] = 1;
    }
    std::int64_t n1 = 0, n2 = 0;
    for (std::size_t j = 0; j < k; ++j) {
      n1 += o[j];
      n2 += s[j];
    }
    if (equal_n) {
      if (n1 < n2) o[k - 1] += n2 - n1;
      else s[k - 1] += n1 - n2;
      n1 = n2 = std::max(n1, n2);
    }
    if (n1 > 0 && n2 > 0) break;
  }
  return table_from_counts(o, s);
}

// ---------------------------------------------------------------------------

void criterion1_identities() {
  Criterion c(1, "identity suite on 1000 random tables");
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool equal_n = trial % 2 == 0;
    const CellTable t = random_table(rng, equal_n);
    const UtilityResult r = tab_utility(t, all_measures());
    const double pmse = raw(r, MeasureId::pMSE);
    const double vw_scaled =
        raw(r, MeasureId::VW) * t.c * (1 - t.c) * (1 - t.c) / static_cast<double>(t.N);
    if (std::abs(pmse - vw_scaled) > 1e-12 * std::max(pmse, vw_scaled)) {
      c.check(false, "pMSE != VW c(1-c)^2/N at trial " + std::to_string(trial));
      break;
    }
    if (t.n1 == t.n2) {
      const double specks = raw(r, MeasureId::SPECKS);
      const double po50 = raw(r, MeasureId::PO50);
      const double mabsdd = raw(r, MeasureId::MabsDD);
      // MabsDD = 2 SPECKS holds bitwise; the PO50 form re-rounds once in the
      // division by 50, so compare at the 1-ulp scale
      if (mabsdd != 2.0 * specks) {
        c.check(false, "MabsDD != 2 SPECKS at trial " + std::to_string(trial));
        break;
      }
      if (std::abs(specks - 2.0 * po50 / 100.0) > 1e-14 * std::max(1.0, specks)) {
        c.check(false, "SPECKS != 2 PO50/100 at trial " + std::to_string(trial));
        break;
      }
      const double dbhatt = raw(r, MeasureId::dBhatt);
      const double via_ft = std::sqrt(raw(r, MeasureId::FT) / (8.0 * static_cast<double>(t.n1)));
      if (std::abs(dbhatt - via_ft) > 1e-9) {
        c.check(false, "dBhatt != sqrt(FT/(8 n1)) at trial " + std::to_string(trial));
        break;
      }
    }
  }
  c.finish(5.0);
}

void criterion2_saturated_equivalence() {
  Criterion c(2, "saturated logistic matches tabular pMSE with df = k-1");
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int nvars = 2 + static_cast<int>(rng.index(2));
    std::vector<Variable> vars;
    std::vector<int> levels;
    for (int v = 0; v < nvars; ++v) {
      Variable var;
      var.name = "v" + std::to_string(v);
      var.kind = VarKind::categorical;
      const int L = 2 + static_cast<int>(rng.index(3));
      levels.push_back(L);
      for (int l = 0; l < L; ++l) var.levels.push_back("l" + std::to_string(l));
      var.allow_missing = false;
      vars.push_back(var);
    }
    auto gen = [&](std::size_t n) {
      std::vector<Column> cols(vars.size());
      for (std::size_t v = 0; v < vars.size(); ++v) {
        for (std::size_t i = 0; i < n; ++i) {
          // mildly skewed marginals
          const std::size_t L = vars[v].levels.size();
          std::size_t code = rng.index(L);
          if (rng.uniform() < 0.4) code = 0;
          cols[v].codes.push_back(static_cast<std::int32_t>(code));
        }
      }
      return Dataset(vars, std::move(cols));
    };
    const std::size_t n1 = 60 + rng.index(341);
    const std::size_t n2 = 60 + rng.index(341);
    const DatasetPair p = pair(gen(n1), gen(n2));
    std::vector<std::string> names;
    for (const auto& v : vars) names.push_back(v.name);
    const CellTable table = crosstab(p, names);
    const UtilityResult tab = tab_utility(table, {MeasureId::pMSE});
    const PropensityScores fit = fit_model(p, ModelSpec::logistic(nvars), 0);
    const UtilityResult gen_res = score_utility(fit, {MeasureId::pMSE});
    if (std::abs(raw(gen_res, MeasureId::pMSE) - raw(tab, MeasureId::pMSE)) > 1e-6) {
      c.check(false, "pMSE mismatch at trial " + std::to_string(trial));
      break;
    }
    if (*fit.df != static_cast<long>(table.k) - 1) {
      c.check(false, "df != k-1 at trial " + std::to_string(trial) + " (df " +
                         std::to_string(*fit.df) + ", k " + std::to_string(table.k) + ")");
      break;
    }
  }
  c.finish(120.0);
}

void criterion3_zero_suite() {
  Criterion c(3, "identical inputs give zero through both paths");
  const Dataset orig = load_fixture("fixture4.csv", "fixture4.meta");
  const DatasetPair p = pair(orig, orig);
  const std::vector<std::string> vars = {"alpha", "beta", "gamma", "delta"};
  const UtilityResult tab = tab_utility(crosstab(p, vars), all_measures());
  for (MeasureId id : {MeasureId::pMSE, MeasureId::VW, MeasureId::FT, MeasureId::JSD,
                       MeasureId::G, MeasureId::SPECKS, MeasureId::MabsDD, MeasureId::WMabsDD,
                       MeasureId::dBhatt, MeasureId::PO50}) {
    c.check(raw(tab, id) == 0.0, "tabular " + measure_name(id) + " nonzero");
  }
  const PropensityScores logit = fit_model(p, ModelSpec::logistic(2), 0);
  const UtilityResult lg = score_utility(logit, score_measures());
  c.check(std::abs(raw(lg, MeasureId::pMSE)) < 1e-16, "logistic pMSE nonzero");
  c.check(raw(lg, MeasureId::SPECKS) == 0.0, "logistic SPECKS nonzero");
  c.check(raw(lg, MeasureId::PO50) == 0.0, "logistic PO50 nonzero");
  const PropensityScores cart = fit_model(p, ModelSpec::cart_model(), 0);
  const UtilityResult ct = score_utility(cart, score_measures());
  c.check(raw(ct, MeasureId::pMSE) == 0.0, "cart pMSE nonzero");
  c.check(raw(ct, MeasureId::SPECKS) == 0.0, "cart SPECKS nonzero");
  c.check(raw(ct, MeasureId::PO50) == 0.0, "cart PO50 nonzero");
  c.finish(30.0);
}

void criterion4_null_calibration() {
  Criterion c(4, "null calibration on the 4-variable fixture (m=200)");
  const Dataset orig = load_fixture("fixture4.csv", "fixture4.meta");
  const CalibrationReport rep = calibration_sim(orig, 4, 200, 404);
  auto in_range = [&](MeasureId id, double lo, double hi) {
    const double v = rep.mean_standardized.at(id);
    std::printf("     mean S_%s = %.4f (band [%.2f, %.2f])\n", measure_name(id).c_str(), v, lo,
                hi);
    c.check(lo <= v && v <= hi,
            "mean S_" + measure_name(id) + " = " + std::to_string(v) + " outside [" +
                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  };
  in_range(MeasureId::pMSE, 0.90, 1.20);
  in_range(MeasureId::WMabsDD, 0.90, 1.20);
  in_range(MeasureId::FT, 0.90, 1.35);
  in_range(MeasureId::G, 0.80, 1.15);
  c.finish(180.0);
}

void criterion5_power_ordering() {
  Criterion c(5, "power ordering on 3 dependent variables (m=200)");
  const Dataset orig = load_fixture("fixture4.csv", "fixture4.meta");
  const PowerReport rep = power_sim(
      orig, 3, 200, {MeasureId::pMSE, MeasureId::FT, MeasureId::JSD, MeasureId::PO50}, 505);
  const double p_pmse = rep.power.at(MeasureId::pMSE).value_or(0);
  const double p_ft = rep.power.at(MeasureId::FT).value_or(0);
  const double p_jsd = rep.power.at(MeasureId::JSD).value_or(0);
  const double p_po50 = rep.power.at(MeasureId::PO50).value_or(0);
  std::printf("     power: pMSE %.1f  FT %.1f  JSD %.1f  PO50 %.1f\n", p_pmse, p_ft, p_jsd,
              p_po50);
  c.check(p_pmse > 0, "power(pMSE) not positive");
  c.check(p_pmse >= 2 * p_po50, "power(pMSE) " + std::to_string(p_pmse) + " < 2*power(PO50) " +
                                    std::to_string(2 * p_po50));
  const double lo = std::min({p_pmse, p_ft, p_jsd});
  const double hi = std::max({p_pmse, p_ft, p_jsd});
  c.check(hi <= 1.15 * lo, "pMSE/FT/JSD powers spread " + std::to_string(hi / lo - 1) +
                               " exceeds 15% (" + std::to_string(p_pmse) + "/" +
                               std::to_string(p_ft) + "/" + std::to_string(p_jsd) + ")");
  c.finish(180.0);
}

void criterion6_resampling_consistency() {
  Criterion c(6, "permutation and pairs nulls agree for CART (2 vars)");
  const Dataset orig = load_fixture("fixture4.csv", "fixture4.meta");
  CalibrationOptions opts;
  opts.with_permutation = true;
  opts.permutation_B = 50;
  opts.permutation_syntheses = 100;
  opts.with_pairs = true;
  opts.pairs_m = 16;
  const CalibrationReport rep = calibration_sim(orig, 2, 16, 606, opts);
  c.check(rep.perm_S_pMSE.has_value(), "permutation column missing");
  c.check(rep.pairs_S_pMSE.has_value(), "pairs column missing");
  const double perm = rep.perm_S_pMSE.value_or(-1);
  const double pairs = rep.pairs_S_pMSE.value_or(-2);
  std::printf("     mean S_pMSE: perm %.4f  pairs %.4f  |diff| %.4f (<= 0.25)\n", perm, pairs,
              std::abs(perm - pairs));
  c.check(std::abs(perm - pairs) <= 0.25, "|mean S_pMSE(perm) - mean S_pMSE(pairs)| = " +
                                              std::to_string(std::abs(perm - pairs)) +
                                              " > 0.25 (perm " + std::to_string(perm) +
                                              ", pairs " + std::to_string(pairs) + ")");
  // permutation requests for SPECKS/PO50/U are rejected
  const Dataset syn = synth_catall(orig, 1, 3)[0];
  const DatasetPair p = pair(orig, syn);
  for (MeasureId id : {MeasureId::SPECKS, MeasureId::PO50, MeasureId::U}) {
    bool rejected = false;
    try {
      null_permutation(p, ModelSpec::cart_model(), {id}, 2, 0);
    } catch (const ContractError&) {
      rejected = true;
    }
    c.check(rejected, "permutation request for " + measure_name(id) + " was not rejected");
  }
  c.finish(300.0);
}

void criterion7_correlation_structure() {
  Criterion c(7, "three-way sweep correlations on a poor synthesis");
  const auto meta = load_metadata(data_path("fixture4.meta"));
  const Dataset orig = load_csv(data_path("fixture4.csv"), meta);
  const Dataset poor = load_csv(data_path("fixture4_poor.csv"), meta);
  const SweepResult sw = sweep(pair(orig, poor), 3, all_measures(), BinningSpec{});
  c.check(sw.entries.size() == 4, "expected C(4,3)=4 entries");
  auto corr = [&](MeasureId a, MeasureId b) {
    double ma = 0, mb = 0;
    const double n = static_cast<double>(sw.entries.size());
    for (const auto& e : sw.entries) {
      ma += raw(e.result, a);
      mb += raw(e.result, b);
    }
    ma /= n;
    mb /= n;
    double num = 0, va = 0, vb = 0;
    for (const auto& e : sw.entries) {
      const double da = raw(e.result, a) - ma;
      const double db = raw(e.result, b) - mb;
      num += da * db;
      va += da * da;
      vb += db * db;
    }
    return num / std::sqrt(va * vb);
  };
  c.check(std::abs(corr(MeasureId::VW, MeasureId::pMSE) - 1.0) < 1e-9,
          "corr(VW, pMSE) != 1");
  c.check(std::abs(corr(MeasureId::SPECKS, MeasureId::MabsDD) - 1.0) < 1e-9,
          "corr(SPECKS, MabsDD) != 1");
  c.check(std::abs(corr(MeasureId::SPECKS, MeasureId::PO50) - 1.0) < 1e-9,
          "corr(SPECKS, PO50) != 1");
  c.finish(30.0);
}

void criterion8_sweep_counts_rendering() {
  Criterion c(8, "sweep counts (45/120) and deterministic clamped rendering");
  const auto meta = load_metadata(data_path("fixture10.meta"));
  const Dataset orig = load_csv(data_path("fixture10.csv"), meta);
  const Dataset syn = load_csv(data_path("fixture10_syn.csv"), meta);
  const DatasetPair p = pair(orig, syn);
  const SweepResult two = sweep(p, 2, {MeasureId::pMSE}, BinningSpec{});
  const SweepResult three = sweep(p, 3, {MeasureId::pMSE}, BinningSpec{});
  c.check(two.entries.size() == 45, "two-way entries " + std::to_string(two.entries.size()));
  c.check(three.entries.size() == 120, "three-way entries " + std::to_string(three.entries.size()));

  const std::string svg_a = render_heatmap(two, 31.0, "fixture10");
  const std::string svg_b = render_heatmap(two, 31.0, "fixture10");
  c.check(svg_a == svg_b, "heatmap bytes differ between runs");

  // clamping: an entry forced above max-scale renders like one at max-scale
  SweepResult above = two;
  above.entries[0].result.measures.at(MeasureId::pMSE).standardized = 40.0;
  SweepResult at = two;
  at.entries[0].result.measures.at(MeasureId::pMSE).standardized = 31.0;
  auto first_cell_fill = [](const std::string& svg) {
    const std::size_t title = svg.find("<title>");
    const std::size_t fill = svg.rfind("fill=\"", title);
    return svg.substr(fill, 14);
  };
  c.check(first_cell_fill(render_heatmap(above, 31.0, "t")) ==
              first_cell_fill(render_heatmap(at, 31.0, "t")),
          "values above max-scale do not clamp to the top color");
  c.finish(60.0);
}

// --- criterion 9: CLI byte-determinism across runs and thread counts -------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  std::string stdout_bytes;
  std::string json_bytes;
  std::string svg_bytes;
  int exit = 0;
};

CliRun run_cli(const std::string& args, const std::string& threads, bool json, bool svg,
               const std::string& tag) {
  const std::string dir = std::string(getenv("TMPDIR") ? getenv("TMPDIR") : "/tmp");
  const std::string base = dir + "/synutil_c9_" + tag;
  std::string cmd = "SYNUTIL_THREADS=" + threads + " " + std::string(SYNUTIL_CLI_PATH) + " " + args;
  if (json) cmd += " --out-json " + base + ".json";
  if (svg) cmd += " --out-svg " + base + ".svg";
  cmd += " > " + base + ".out 2>/dev/null";
  CliRun run;
  run.exit = std::system(cmd.c_str());
  run.stdout_bytes = slurp(base + ".out");
  if (json) run.json_bytes = slurp(base + ".json");
  if (svg) run.svg_bytes = slurp(base + ".svg");
  return run;
}

void criterion9_cli_determinism() {
  Criterion c(9, "CLI byte-reproducibility across runs and thread counts");
  const std::string orig = data_path("fixture4.csv");
  const std::string meta = data_path("fixture4.meta");
  const std::string syn = data_path("fixture4_syn.csv");
  const std::string poor = data_path("fixture4_poor.csv");
  const std::string base = " --orig " + orig + " --meta " + meta;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"tab", "tab" + base + " --syn " + syn + " --vars alpha,beta --stats all --seed 1"},
      {"gen-cart", "gen" + base + " --syn " + syn + " --model cart --resamp perm --B 10 --seed 1"},
      {"gen-pairs", "gen" + base + " --syn " + syn + " --syn " + poor +
                        " --model cart --resamp pairs --stats all --seed 1"},
      {"compare", "compare" + base + " --syn " + poor + " --seed 1"},
      {"tables", "tables" + base + " --syn " + poor +
                     " --tables twoway --nworst 4 --max-scale 31 --seed 1"},
      {"power", "power" + base + " --nvars 2..3 --m 40 --seed 1"},
  };
  for (const auto& [tag, argstr] : commands) {
    const bool svg = tag == "tables";
    const CliRun one = run_cli(argstr, "1", true, svg, tag + "_a");
    const CliRun rerun = run_cli(argstr, "1", true, svg, tag + "_b");
    const CliRun eight = run_cli(argstr, "8", true, svg, tag + "_c");
    c.check(one.exit == 0, tag + ": exit " + std::to_string(one.exit));
    c.check(one.stdout_bytes == rerun.stdout_bytes, tag + ": stdout differs between runs");
    c.check(one.json_bytes == rerun.json_bytes, tag + ": json differs between runs");
    c.check(one.stdout_bytes == eight.stdout_bytes, tag + ": stdout differs across threads");
    c.check(one.json_bytes == eight.json_bytes, tag + ": json differs across threads");
    if (svg) {
      c.check(one.svg_bytes == rerun.svg_bytes && one.svg_bytes == eight.svg_bytes,
              tag + ": svg differs");
      c.check(!one.svg_bytes.empty(), tag + ": svg empty");
    }
    c.check(!one.stdout_bytes.empty(), tag + ": stdout empty");
  }
  // exit codes: usage/contract errors are 2
  const CliRun bad = run_cli("tab" + base + " --syn " + syn + " --vars alpha,alpha", "1", false,
                             false, "badvars");
  c.check(WEXITSTATUS(bad.exit) == 2, "duplicate --vars should exit 2");
  c.finish(240.0);
}

}  // namespace

int main() {
  try {
    criterion1_identities();
    criterion2_saturated_equivalence();
    criterion3_zero_suite();
    criterion4_null_calibration();
    criterion5_power_ordering();
    criterion6_resampling_consistency();
    criterion7_correlation_structure();
    criterion8_sweep_counts_rendering();
    criterion9_cli_determinism();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  if (g_failures > 0) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all criteria passed\n");
  return 0;
}
