#include "synutil/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "synutil/errors.hpp"

namespace synutil {

namespace {

const std::vector<std::pair<MeasureId, std::string>>& measure_table() {
  static const std::vector<std::pair<MeasureId, std::string>> table = {
      {MeasureId::pMSE, "pMSE"},       {MeasureId::VW, "VW"},
      {MeasureId::G, "G"},             {MeasureId::FT, "FT"},
      {MeasureId::dBhatt, "dBhatt"},   {MeasureId::JSD, "JSD"},
      {MeasureId::PO50, "PO50"},       {MeasureId::SPECKS, "SPECKS"},
      {MeasureId::MabsDD, "MabsDD"},   {MeasureId::WMabsDD, "WMabsDD"},
      {MeasureId::U, "U"},
  };
  return table;
}

}  // namespace

const std::string& measure_name(MeasureId id) {
  for (const auto& [mid, name] : measure_table()) {
    if (mid == id) return name;
  }
  throw ContractError("unknown measure id");
}

MeasureId parse_measure(const std::string& name) {
  for (const auto& [mid, mname] : measure_table()) {
    if (mname == name) return mid;
  }
  throw ContractError("unknown measure '" + name + "'");
}

const MeasureSet& all_measures() {
  static const MeasureSet set = [] {
    MeasureSet s;
    for (const auto& [mid, name] : measure_table()) s.insert(mid);
    return s;
  }();
  return set;
}

const MeasureSet& score_measures() {
  static const MeasureSet set = {MeasureId::pMSE, MeasureId::PO50, MeasureId::SPECKS,
                                 MeasureId::U};
  return set;
}

MeasureSet parse_measure_set(const std::string& text, const MeasureSet& universe) {
  MeasureSet out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur == "all") {
      out.insert(universe.begin(), universe.end());
    } else {
      const MeasureId id = parse_measure(cur);
      if (!universe.count(id)) {
        throw ContractError("measure '" + cur + "' is not available here");
      }
      out.insert(id);
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') flush();
    else if (ch != ' ') cur.push_back(ch);
  }
  flush();
  if (out.empty()) throw ContractError("empty measure list");
  return out;
}

namespace {

// Exact comparison of cell propensities via cross-multiplication:
// s_a/t_a <?> s_b/t_b without floating point.
int cmp_phat(const Cell& a, const Cell& b) {
  const std::int64_t lhs = a.s * (b.o + b.s);
  const std::int64_t rhs = b.s * (a.o + a.s);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// Sign of phat_j - c, exact: s_j/t_j <?> n2/N  <=>  s_j*n1 <?> o_j*n2.
int cmp_to_c(const Cell& cell, std::int64_t n1, std::int64_t n2) {
  const std::int64_t lhs = cell.s * n1;
  const std::int64_t rhs = cell.o * n2;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

UtilityResult tab_utility(const CellTable& table, const MeasureSet& measures,
                          const TabOptions& opts) {
  if (table.k == 0 || table.cells.empty()) throw ContractError("tab_utility: empty table");
  const double n1 = static_cast<double>(table.n1);
  const double n2 = static_cast<double>(table.n2);
  const double N = static_cast<double>(table.N);
  const double c = table.c;
  const double k = static_cast<double>(table.k);
  const double df = k - 1.0;

  UtilityResult res;
  res.k = table.k;
  res.dfG = table.dfG;
  res.df = static_cast<long>(table.k) - 1;
  res.vars = table.vars;

  auto want = [&](MeasureId id) { return measures.count(id) != 0; };
  auto emit = [&](MeasureId id, double raw, std::optional<double> null_exp) {
    MeasureValue mv;
    mv.raw = raw;
    mv.null_expectation = null_exp;
    if (null_exp && *null_exp > 0.0) mv.standardized = raw / *null_exp;
    res.measures[id] = mv;
  };

  if (want(MeasureId::pMSE)) {
    double sum = 0.0;
    for (const Cell& cell : table.cells) {
      const double t = static_cast<double>(cell.o + cell.s);
      const double d = CellTable::phat(cell) - c;
      sum += t * d * d;
    }
    emit(MeasureId::pMSE, sum / N, df * c * (1 - c) * (1 - c) / N);
  }
  if (want(MeasureId::VW)) {
    double sum = 0.0;
    for (const Cell& cell : table.cells) {
      const double t = static_cast<double>(cell.o + cell.s);
      const double d = static_cast<double>(cell.s) - static_cast<double>(cell.o) * c / (1 - c);
      sum += d * d / (c * t);
    }
    emit(MeasureId::VW, sum, df);
  }
  if (want(MeasureId::G)) {
    // Likelihood-ratio statistic on the count scale; only cells with both
    // counts positive contribute.
    double sum = 0.0;
    for (const Cell& cell : table.cells) {
      if (cell.o > 0 && cell.s > 0) {
        const double a = static_cast<double>(cell.s) / n2;
        const double b = static_cast<double>(cell.o) / n1;
        sum += static_cast<double>(cell.s) * std::log(a / b);
      }
    }
    double raw = 2.0 * sum;
    double null_exp = df;
    if (opts.g_proportion_scale) {
      raw /= n2;
      null_exp /= n2;
    }
    emit(MeasureId::G, raw, null_exp);
  }
  if (want(MeasureId::FT)) {
    double sum = 0.0;
    for (const Cell& cell : table.cells) {
      const double d = std::sqrt(static_cast<double>(cell.s)) -
                       std::sqrt(static_cast<double>(cell.o) * n2 / n1);
      sum += d * d;
    }
    emit(MeasureId::FT, 4.0 * sum, df);
  }
  if (want(MeasureId::dBhatt)) {
    double overlap = 0.0;
    for (const Cell& cell : table.cells) {
      overlap += std::sqrt((static_cast<double>(cell.s) / n2) *
                           (static_cast<double>(cell.o) / n1));
    }
    emit(MeasureId::dBhatt, std::sqrt(std::max(0.0, 1.0 - overlap)), std::nullopt);
  }
  if (want(MeasureId::JSD)) {
    // In bits (log base 2); 0 log 0 = 0.
    double sum = 0.0;
    for (const Cell& cell : table.cells) {
      const double a = static_cast<double>(cell.s) / n2;
      const double b = static_cast<double>(cell.o) / n1;
      if (a > 0) sum += a * std::log2(2 * a / (a + b));
      if (b > 0) sum += b * std::log2(2 * b / (a + b));
    }
    emit(MeasureId::JSD, sum / 2.0, df * std::numbers::ln2 / (2.0 * N));
  }
  if (want(MeasureId::PO50)) {
    // Correct classification above/below c; cells at exactly c count half.
    // The half-credit makes SPECKS = 2*PO50/100 exact for n1 = n2; integer
    // accumulation with one final division keeps it exact in doubles too.
    std::int64_t correct2 = 0;  // twice the correct count
    for (const Cell& cell : table.cells) {
      const int side = cmp_to_c(cell, table.n1, table.n2);
      if (side > 0) correct2 += 2 * cell.s;
      else if (side < 0) correct2 += 2 * cell.o;
      else correct2 += cell.o + cell.s;
    }
    emit(MeasureId::PO50,
         50.0 * (static_cast<double>(correct2 - table.N) / N), std::nullopt);
  }
  const bool need_sorted = want(MeasureId::SPECKS) || want(MeasureId::U);
  if (need_sorted) {
    std::vector<const Cell*> order;
    order.reserve(table.cells.size());
    for (const Cell& cell : table.cells) order.push_back(&cell);
    std::stable_sort(order.begin(), order.end(),
                     [](const Cell* a, const Cell* b) { return cmp_phat(*a, *b) < 0; });
    if (want(MeasureId::SPECKS)) {
      // Weighted two-sample KS distance between the per-source CDFs of the
      // cell propensities, evaluated after each group of tied cells. The gap
      // numerator o n2 - s n1 stays integral until the final division.
      std::int64_t gap = 0;
      std::int64_t best = 0;
      std::size_t i = 0;
      while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && cmp_phat(*order[i], *order[j]) == 0) {
          gap += order[j]->o * table.n2 - order[j]->s * table.n1;
          ++j;
        }
        best = std::max(best, std::abs(gap));
        i = j;
      }
      emit(MeasureId::SPECKS,
           static_cast<double>(best) / (n1 * n2), std::nullopt);
    }
    if (want(MeasureId::U)) {
      // Rank-sum of the synthetic mass: each cell contributes its records as
      // tied observations at the cell propensity; ties take midranks.
      double ranks_before = 0.0;
      double u = 0.0;
      std::size_t i = 0;
      while (i < order.size()) {
        std::size_t j = i;
        std::int64_t group_total = 0;
        std::int64_t group_syn = 0;
        while (j < order.size() && cmp_phat(*order[i], *order[j]) == 0) {
          group_total += order[j]->o + order[j]->s;
          group_syn += order[j]->s;
          ++j;
        }
        const double midrank = ranks_before + (static_cast<double>(group_total) + 1.0) / 2.0;
        u += static_cast<double>(group_syn) * midrank;
        ranks_before += static_cast<double>(group_total);
        i = j;
      }
      emit(MeasureId::U, u, std::nullopt);
    }
  }
  if (want(MeasureId::MabsDD)) {
    std::int64_t sum = 0;
    for (const Cell& cell : table.cells) {
      sum += std::abs(cell.o * table.n2 - cell.s * table.n1);
    }
    emit(MeasureId::MabsDD, static_cast<double>(sum) / (n1 * n2), std::nullopt);
  }
  if (want(MeasureId::WMabsDD)) {
    // |s - o n2/n1| scaled so each cell has null expectation 1; the optional
    // split-weight variant divides by an extra sqrt(1/(1-c)).
    double sum = 0.0;
    for (const Cell& cell : table.cells) {
      const double t = static_cast<double>(cell.o + cell.s);
      double divisor = std::sqrt(2.0 * c * t / std::numbers::pi);
      if (opts.wmabsdd_split_weight) divisor /= std::sqrt(1.0 - c);
      sum += std::abs(static_cast<double>(cell.s) -
                      static_cast<double>(cell.o) * n2 / n1) /
             divisor;
    }
    emit(MeasureId::WMabsDD, sum, df);
  }
  return res;
}

}  // namespace synutil
