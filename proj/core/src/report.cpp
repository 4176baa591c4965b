#include "synutil/report.hpp"

#include <json.hpp>
#include <sstream>

#include "synutil/errors.hpp"

namespace synutil {

namespace {

using nlohmann::json;

json measure_json(const MeasureValue& mv) {
  json j;
  j["raw"] = mv.raw;
  j["null_expectation"] = mv.null_expectation ? json(*mv.null_expectation) : json(nullptr);
  j["standardized"] = mv.standardized ? json(*mv.standardized) : json(nullptr);
  return j;
}

json utility_json(const UtilityResult& result) {
  json j;
  json measures = json::object();
  for (const auto& [id, mv] : result.measures) {
    measures[measure_name(id)] = measure_json(mv);
  }
  j["measures"] = measures;
  j["k"] = result.k;
  j["dfG"] = result.dfG;
  if (result.df) j["df"] = *result.df;
  j["vars"] = result.vars;
  // non-fatal advisory: standardized ratios above 10 flag utility problems
  long above = 0;
  for (const auto& [id, mv] : result.measures) {
    if (mv.standardized && *mv.standardized > 10.0) ++above;
  }
  j["advisory"] = {{"ratios_above_10", above},
                   {"note", "aim for standardized utility ratios below 10"}};
  return j;
}

json model_json(const PropensityScores& model) {
  json j;
  switch (model.model_kind) {
    case ModelKind::saturated_logistic: j["kind"] = "saturated-logistic"; break;
    case ModelKind::logistic_order_n: j["kind"] = "logistic-order-n"; break;
    case ModelKind::cart: j["kind"] = "cart"; break;
  }
  if (model.df) j["df"] = *model.df;
  if (model.model_kind == ModelKind::cart) {
    j["tree"] = {{"nodes", model.tree_nodes},
                 {"leaves", model.tree_leaves},
                 {"depth", model.tree_depth}};
  } else {
    j["coefficients"] = model.columns_total - model.columns_aliased;
    j["aliased"] = model.columns_aliased;
    j["converged"] = model.converged;
    j["clamped"] = model.clamped;
    j["iterations"] = model.iterations;
  }
  return j;
}

json null_json(const NullEstimate& est, bool keep_replicates) {
  json j;
  j["method"] = est.method == NullMethod::permutation ? "perm" : "pairs";
  j["mean"] = est.mean;
  j["sd"] = est.sd ? json(*est.sd) : json(nullptr);
  j["B"] = est.replicates.size();
  if (keep_replicates) j["replicates"] = est.replicates;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

void apply_null(UtilityResult& result, const NullEstimates& nulls) {
  for (auto& [id, mv] : result.measures) {
    const auto it = nulls.find(id);
    if (it == nulls.end() || mv.standardized) continue;
    mv.null_expectation = it->second.mean;
    mv.standardized = standardize(mv.raw, it->second);
  }
}

std::string report_utility(const UtilityResult& result, const PropensityScores* model,
                           const NullEstimates* nulls, bool keep_replicates) {
  json j = utility_json(result);
  if (model) j["model"] = model_json(*model);
  if (nulls && !nulls->empty()) {
    json null_obj = json::object();
    for (const auto& [id, est] : *nulls) {
      null_obj[measure_name(id)] = null_json(est, keep_replicates);
    }
    j["null"] = null_obj;
  }
  return dump(j);
}

std::string report_sweep(const SweepResult& sweep,
                         const std::vector<std::pair<std::vector<std::string>, double>>* worst,
                         MeasureId worst_by) {
  json j;
  j["arity"] = sweep.arity;
  json entries = json::array();
  for (const auto& entry : sweep.entries) {
    json e = utility_json(entry.result);
    e["vars"] = entry.vars;
    entries.push_back(e);
  }
  j["entries"] = entries;
  json summary = json::object();
  for (const auto& [id, ms] : sweep.summary) {
    json s;
    s["median"] = ms.median_raw;
    s["max"] = ms.max_raw;
    if (ms.median_standardized) {
      s["median_standardized"] = *ms.median_standardized;
      s["max_standardized"] = *ms.max_standardized;
    }
    summary[measure_name(id)] = s;
  }
  summary["df"] = {{"median", sweep.median_df}, {"max", sweep.max_df}};
  j["summary"] = summary;
  if (sweep.fixed_var) j["fixed_var"] = *sweep.fixed_var;
  if (worst) {
    json w = json::array();
    for (const auto& [vars, value] : *worst) {
      w.push_back({{"vars", vars}, {measure_name(worst_by), value}});
    }
    j["worst"] = w;
  }
  return dump(j);
}

std::string report_power(const std::vector<PowerReport>& power,
                         const std::vector<CalibrationReport>& calibration) {
  json j;
  json rows = json::array();
  for (const auto& rep : power) {
    json r;
    r["nvars"] = rep.nvars;
    r["m"] = rep.m;
    json p = json::object();
    for (const auto& [id, value] : rep.power) {
      p[measure_name(id)] = value ? json(*value) : json(nullptr);
    }
    r["power"] = p;
    r["median_df"] = {{"good", rep.median_df_good}, {"bad", rep.median_df_bad}};
    r["median_dfG"] = {{"good", rep.median_dfG_good}, {"bad", rep.median_dfG_bad}};
    rows.push_back(r);
  }
  j["power"] = rows;
  json cals = json::array();
  for (const auto& rep : calibration) {
    json r;
    r["nvars"] = rep.nvars;
    r["m"] = rep.m;
    json means = json::object();
    for (const auto& [id, value] : rep.mean_standardized) {
      means["S_" + measure_name(id)] = value;
    }
    r["mean_standardized"] = means;
    if (rep.perm_S_pMSE) r["perm_S_pMSE"] = *rep.perm_S_pMSE;
    if (rep.pairs_S_pMSE) {
      r["pairs_S_pMSE"] = *rep.pairs_S_pMSE;
      r["pairs_S_SPECKS"] = *rep.pairs_S_SPECKS;
      r["pairs_S_U"] = *rep.pairs_S_U;
    }
    cals.push_back(r);
  }
  j["calibration"] = cals;
  return dump(j);
}

namespace {

std::string fixed(double v, int decimals) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(decimals);
  out << v;
  return out.str();
}

void pad_to(std::string& s, std::size_t width) {
  while (s.size() < width) s.insert(s.begin(), ' ');
}

std::string row_text(const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string cell = cells[i];
    pad_to(cell, widths[i]);
    if (i) line += "  ";
    line += cell;
  }
  return line + "\n";
}

std::string table_text(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) out += row_text(row, widths);
  return out;
}

}  // namespace

std::string text_compare_table(const SweepResult& arity1) {
  if (arity1.arity != 1) throw ContractError("text_compare_table: needs an arity-1 sweep");
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"", "S_pMSE", "df"});
  for (const auto& entry : arity1.entries) {
    const MeasureValue& mv = entry.result.measures.at(MeasureId::pMSE);
    std::string name = entry.vars[0];
    std::string s = mv.standardized ? fixed(*mv.standardized, 7) : "NA";
    rows.push_back({name, s, std::to_string(entry.result.df.value_or(0))});
  }
  // left-align the variable names
  std::size_t width = 0;
  for (auto& row : rows) width = std::max(width, row[0].size());
  for (auto& row : rows) row[0].resize(width, ' ');
  return "Selected utility measures:\n" + table_text(rows);
}

std::string text_power_table(const std::vector<PowerReport>& reports) {
  if (reports.empty()) return "";
  std::vector<MeasureId> ids;
  for (const auto& [id, v] : reports.front().power) ids.push_back(id);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"n"};
  for (MeasureId id : ids) header.push_back(measure_name(id));
  header.insert(header.end(),
                {"df_good", "dfG_good", "df_bad", "dfG_bad"});
  rows.push_back(header);
  for (const auto& rep : reports) {
    std::vector<std::string> row = {std::to_string(rep.nvars)};
    for (MeasureId id : ids) {
      const auto& p = rep.power.at(id);
      row.push_back(p ? fixed(*p, 1) : "NA");
    }
    row.push_back(std::to_string(rep.median_df_good));
    row.push_back(std::to_string(rep.median_dfG_good));
    row.push_back(std::to_string(rep.median_df_bad));
    row.push_back(std::to_string(rep.median_dfG_bad));
    rows.push_back(row);
  }
  return "Empirical power (bad vs good syntheses, scaled by good sd):\n" + table_text(rows);
}

std::string text_calibration_table(const std::vector<CalibrationReport>& reports) {
  if (reports.empty()) return "";
  std::vector<MeasureId> ids;
  for (const auto& [id, v] : reports.front().mean_standardized) ids.push_back(id);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"n"};
  for (MeasureId id : ids) header.push_back("S_" + measure_name(id));
  if (reports.front().perm_S_pMSE) header.push_back("perm_S_pMSE");
  if (reports.front().pairs_S_pMSE) {
    header.insert(header.end(), {"pairs_S_pMSE", "pairs_S_SPECKS", "pairs_S_U"});
  }
  rows.push_back(header);
  for (const auto& rep : reports) {
    std::vector<std::string> row = {std::to_string(rep.nvars)};
    for (MeasureId id : ids) row.push_back(fixed(rep.mean_standardized.at(id), 2));
    if (rep.perm_S_pMSE) row.push_back(fixed(*rep.perm_S_pMSE, 2));
    if (rep.pairs_S_pMSE) {
      row.push_back(fixed(*rep.pairs_S_pMSE, 2));
      row.push_back(fixed(*rep.pairs_S_SPECKS, 2));
      row.push_back(fixed(*rep.pairs_S_U, 2));
    }
    rows.push_back(row);
  }
  return "Mean standardized utility for correct syntheses:\n" + table_text(rows);
}

}  // namespace synutil
