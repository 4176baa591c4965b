// synutil: general utility measures for synthetic tabular data.
//
// Subcommands: tab, gen, compare, tables, power. See README.md and
// docs/formats.md for the file formats and the measure catalogue.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "synutil/crosstab.hpp"
#include "synutil/dataset.hpp"
#include "synutil/errors.hpp"
#include "synutil/harness.hpp"
#include "synutil/measures.hpp"
#include "synutil/nullcal.hpp"
#include "synutil/propensity.hpp"
#include "synutil/report.hpp"
#include "synutil/rng.hpp"
#include "synutil/sweep.hpp"

namespace {

using namespace synutil;

struct CommonArgs {
  std::string orig_path;
  std::vector<std::string> syn_paths;
  std::string meta_path;
  std::string stats = "pMSE";
  std::string model = "cart";
  std::string resamp = "none";
  int B = 50;
  int groups = 5;
  std::uint64_t seed = 0;
  std::string out_json;
  std::string out_svg;
  std::optional<double> max_scale;
  int nworst = 4;
  std::string fixed;
  bool keep_replicates = false;
  std::vector<std::string> vars;
  std::string tables = "twoway";
  std::string nvars_range = "2..4";
  int m = 200;
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path);
  out << text;
}

ModelSpec parse_model(const std::string& text) {
  if (text == "cart") return ModelSpec::cart_model();
  if (text.rfind("logit:", 0) == 0) {
    const std::string arg = text.substr(6);
    try {
      const int order = std::stoi(arg);
      if (order >= 1) return ModelSpec::logistic(order);
    } catch (...) {
    }
    throw ContractError("bad --model: logit order must be a positive integer, got '" + arg + "'");
  }
  throw ContractError("bad --model '" + text + "' (expected cart or logit:N)");
}

std::pair<int, int> parse_nvars_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo >= 1 && hi >= lo) return {lo, hi};
  } catch (...) {
  }
  throw ContractError("bad --nvars '" + text + "' (expected N or A..B)");
}

std::vector<std::string> check_vars(const std::vector<std::string>& vars) {
  if (vars.empty()) throw ContractError("--vars is required");
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v).second) throw ContractError("duplicate variable '" + v + "' in --vars");
  }
  return vars;
}

DatasetPair load_pair(const CommonArgs& args, std::size_t syn_index = 0) {
  if (args.orig_path.empty()) throw ContractError("--orig is required");
  if (args.meta_path.empty()) throw ContractError("--meta is required");
  if (args.syn_paths.size() <= syn_index) throw ContractError("--syn is required");
  const auto meta = load_metadata(args.meta_path);
  return pair(load_csv(args.orig_path, meta), load_csv(args.syn_paths[syn_index], meta));
}

std::string fixed_decimals(double v, int decimals) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(decimals);
  out << v;
  return out.str();
}

void print_measures(std::ostream& out, const UtilityResult& res) {
  for (const auto& [id, mv] : res.measures) {
    out << measure_name(id) << " " << format_double(mv.raw);
    if (mv.standardized) out << "  S_" << measure_name(id) << " " << format_double(*mv.standardized);
    out << "\n";
  }
}

int cmd_tab(const CommonArgs& args) {
  const auto vars = check_vars(args.vars);
  BinningSpec binning;
  binning.groups = args.groups;
  const DatasetPair binned = bin_pair(load_pair(args), binning);
  const MeasureSet measures = parse_measure_set(args.stats, all_measures());
  const CellTable table = crosstab(binned, vars);
  const UtilityResult res = tab_utility(table, measures);

  std::cout << "Tabular utility for " << vars.size() << " variable(s): ";
  for (std::size_t i = 0; i < vars.size(); ++i) std::cout << (i ? "," : "") << vars[i];
  std::cout << "\nk " << res.k << "  dfG " << res.dfG << "  df " << *res.df << "\n";
  print_measures(std::cout, res);
  if (!args.out_json.empty()) {
    write_text_file(args.out_json, report_utility(res, nullptr, nullptr, args.keep_replicates));
  }
  return 0;
}

int cmd_gen(const CommonArgs& args) {
  const ModelSpec model = parse_model(args.model);
  const MeasureSet measures = parse_measure_set(args.stats, score_measures());
  const DatasetPair p = load_pair(args);
  const PropensityScores scores = fit_model(p, model, args.seed);
  UtilityResult res = score_utility(scores, measures);

  NullEstimates nulls;
  if (args.resamp == "perm") {
    nulls = null_permutation(p, model, measures, args.B, args.seed);
    apply_null(res, nulls);
  } else if (args.resamp == "pairs") {
    if (args.syn_paths.size() < 2) {
      throw ContractError("--resamp pairs needs at least two --syn datasets");
    }
    const auto meta = load_metadata(args.meta_path);
    std::vector<Dataset> syntheses;
    for (const auto& path : args.syn_paths) syntheses.push_back(load_csv(path, meta));
    nulls = null_pairs(syntheses, model, measures, args.seed);
    apply_null(res, nulls);
  } else if (args.resamp != "none") {
    throw ContractError("bad --resamp '" + args.resamp + "' (expected none, perm or pairs)");
  }

  std::cout << "Propensity-score utility (" << args.model << ", resamp " << args.resamp << ")\n";
  if (scores.df) std::cout << "df " << *scores.df << "\n";
  if (scores.model_kind == ModelKind::cart) {
    std::cout << "tree leaves " << scores.tree_leaves << "  depth " << scores.tree_depth << "\n";
  } else if (!scores.converged) {
    std::cout << "warning: IRLS did not converge within the iteration cap\n";
  }
  print_measures(std::cout, res);
  if (!args.out_json.empty()) {
    write_text_file(args.out_json,
                    report_utility(res, &scores, nulls.empty() ? nullptr : &nulls,
                                   args.keep_replicates));
  }
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  BinningSpec binning;
  binning.groups = args.groups;
  const DatasetPair p = load_pair(args);
  const SweepResult res = sweep(p, 1, {MeasureId::pMSE}, binning);
  std::cout << text_compare_table(res);
  if (!args.out_json.empty()) {
    write_text_file(args.out_json, report_sweep(res, nullptr, MeasureId::pMSE));
  }
  return 0;
}

int cmd_tables(const CommonArgs& args) {
  if (args.tables != "twoway" && args.tables != "threeway") {
    throw ContractError("bad --tables '" + args.tables + "' (expected twoway or threeway)");
  }
  const int arity = args.tables == "twoway" ? 2 : 3;
  BinningSpec binning;
  binning.groups = args.groups;
  MeasureSet measures = parse_measure_set(args.stats, all_measures());
  measures.insert(MeasureId::pMSE);
  const DatasetPair p = load_pair(args);
  SweepResult res = sweep(p, arity, measures, binning);

  const auto worst = worst_n(res, static_cast<std::size_t>(std::max(args.nworst, 1)));
  std::cout << (arity == 2 ? "Two-way" : "Three-way") << " utility measure (S_pMSE) for "
            << res.entries.size() << " tables.\n";
  std::cout << "Variable combinations with worst " << worst.size()
            << " utility scores (S_pMSE):\n";
  for (const auto& [vars, value] : worst) {
    for (std::size_t i = 0; i < vars.size(); ++i) std::cout << (i ? ":" : "") << vars[i];
    std::cout << " " << fixed_decimals(value, 2) << "\n";
  }
  const MeasureSummary& ms = res.summary.at(MeasureId::pMSE);
  std::cout << "Median and maximum of utility measures for all tables compared\n";
  std::cout << "        pMSE  S_pMSE  df\n";
  std::cout << "Median  " << fixed_decimals(ms.median_raw, 4) << "  "
            << fixed_decimals(ms.median_standardized.value_or(0), 2) << "  "
            << fixed_decimals(res.median_df, 1) << "\n";
  std::cout << "Maximum " << fixed_decimals(ms.max_raw, 4) << "  "
            << fixed_decimals(ms.max_standardized.value_or(0), 2) << "  "
            << fixed_decimals(res.max_df, 1) << "\n";

  std::string svg;
  if (arity == 2) {
    svg = render_heatmap(res, args.max_scale, "Two-way S_pMSE");
  } else {
    const std::string fixed_var = args.fixed.empty() ? pick_fixed_var(res) : args.fixed;
    res.fixed_var = fixed_var;
    const SweepResult projected = fix_third_var(res, fixed_var);
    svg = render_heatmap(projected, args.max_scale, "Three-way S_pMSE with " + fixed_var);
    std::cout << "Fixed variable: " << fixed_var << "\n";
  }
  if (!args.out_svg.empty()) write_text_file(args.out_svg, svg);
  if (!args.out_json.empty()) {
    write_text_file(args.out_json, report_sweep(res, &worst, MeasureId::pMSE));
  }
  return 0;
}

int cmd_power(const CommonArgs& args) {
  if (args.orig_path.empty()) throw ContractError("--orig is required");
  if (args.meta_path.empty()) throw ContractError("--meta is required");
  const auto meta = load_metadata(args.meta_path);
  const Dataset original = load_csv(args.orig_path, meta);
  BinningSpec binning;
  binning.groups = args.groups;
  const Dataset binned = bin_numeric(original, binning);

  const auto [lo, hi] = parse_nvars_range(args.nvars_range);
  if (static_cast<std::size_t>(hi) > binned.n_vars()) {
    throw ContractError("--nvars exceeds the dataset's variable count");
  }

  std::vector<PowerReport> power_rows;
  std::vector<CalibrationReport> cal_rows;
  for (int nv = lo; nv <= hi; ++nv) {
    if (args.m >= 2) {
      power_rows.push_back(power_sim(binned, nv, args.m, all_measures(), args.seed));
    }
    cal_rows.push_back(calibration_sim(binned, nv, args.m, args.seed));
  }
  if (args.m < 2) {
    std::cout << "warning: power needs m >= 2; power columns omitted\n";
  } else {
    std::cout << text_power_table(power_rows) << "\n";
  }
  std::cout << text_calibration_table(cal_rows);
  if (!args.out_json.empty()) {
    write_text_file(args.out_json, report_power(power_rows, cal_rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"general utility measures for synthetic tabular data"};
  app.require_subcommand(1);
  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool needs_syn) {
    cmd->add_option("--orig", args.orig_path, "original data CSV")->required();
    cmd->add_option("--meta", args.meta_path, "metadata document")->required();
    if (needs_syn) {
      cmd->add_option("--syn", args.syn_paths, "synthetic data CSV (repeatable)")->required();
    }
    cmd->add_option("--groups", args.groups, "quantile groups for numeric variables");
    cmd->add_option("--seed", args.seed, "random seed (default 0)");
    cmd->add_option("--out-json", args.out_json, "write the JSON report here");
  };

  CLI::App* tab = app.add_subcommand("tab", "tabular utility over a variable subset");
  add_common(tab, true);
  tab->add_option("--vars", args.vars, "comma-separated variable names")
      ->required()
      ->delimiter(',');
  tab->add_option("--stats", args.stats, "measures to compute (default pMSE; 'all')");

  CLI::App* gen = app.add_subcommand("gen", "propensity-score utility for a synthesis");
  add_common(gen, true);
  gen->add_option("--stats", args.stats, "score measures (default pMSE; 'all')");
  gen->add_option("--model", args.model, "propensity model: cart or logit:N");
  gen->add_option("--resamp", args.resamp, "null estimation: none, perm or pairs");
  gen->add_option("--B", args.B, "permutation replicates (default 50)");
  gen->add_flag("--keep-replicates", args.keep_replicates, "include replicates in the report");

  CLI::App* compare = app.add_subcommand("compare", "one-way utility for every variable");
  add_common(compare, true);

  CLI::App* tables = app.add_subcommand("tables", "two- or three-way sweep with heatmap");
  add_common(tables, true);
  tables->add_option("--tables", args.tables, "twoway or threeway");
  tables->add_option("--stats", args.stats, "measures to compute (default pMSE; 'all')");
  tables->add_option("--nworst", args.nworst, "how many worst combinations to list");
  tables->add_option("--max-scale", [&args](const std::vector<std::string>& values) {
    args.max_scale = std::stod(values[0]);
    return true;
  }, "fixed top of the heatmap color scale");
  tables->add_option("--fixed", args.fixed, "third variable held fixed (threeway)");
  tables->add_option("--out-svg", args.out_svg, "write the heatmap here");

  CLI::App* power = app.add_subcommand("power", "power and calibration study on one dataset");
  power->add_option("--orig", args.orig_path, "original data CSV")->required();
  power->add_option("--meta", args.meta_path, "metadata document")->required();
  power->add_option("--groups", args.groups, "quantile groups for numeric variables");
  power->add_option("--seed", args.seed, "random seed (default 0)");
  power->add_option("--out-json", args.out_json, "write the JSON report here");
  power->add_option("--nvars", args.nvars_range, "table sizes to study, N or A..B");
  power->add_option("--m", args.m, "replicates per synthesizer (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (tab->parsed()) return cmd_tab(args);
    if (gen->parsed()) return cmd_gen(args);
    if (compare->parsed()) return cmd_compare(args);
    if (tables->parsed()) return cmd_tables(args);
    if (power->parsed()) return cmd_power(args);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
