#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "synutil/errors.hpp"
#include "synutil/sweep.hpp"

namespace synutil {

namespace {

// Fixed perceptually-ordered ramp (9 steps, low to high); documented in
// docs/formats.md. Golden-file tests depend on these exact values.
const char* const kRamp[9] = {
    "#440154", "#472d7b", "#3b528b", "#2c728e", "#21918c",
    "#28ae80", "#5ec962", "#addc30", "#fde725",
};

int color_bin(double value, double max_scale) {
  if (!(value > 0.0)) return 0;
  const int bin = static_cast<int>(std::floor(value / max_scale * 9.0));
  return std::clamp(bin, 0, 8);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

double entry_value(const SweepEntry& entry, MeasureId by) {
  const auto it = entry.result.measures.find(by);
  if (it == entry.result.measures.end()) {
    throw ContractError("heatmap: sweep entry is missing measure " + measure_name(by));
  }
  return it->second.standardized.value_or(it->second.raw);
}

}  // namespace

SweepResult fix_third_var(const SweepResult& result, const std::string& fixed) {
  if (result.arity != 3) throw ContractError("fix_third_var: requires a three-way sweep");
  SweepResult out;
  out.arity = 2;
  out.fixed_var = fixed;
  bool seen = false;
  for (const auto& entry : result.entries) {
    const auto it = std::find(entry.vars.begin(), entry.vars.end(), fixed);
    if (it == entry.vars.end()) continue;
    seen = true;
    SweepEntry projected;
    projected.result = entry.result;
    for (const auto& var : entry.vars) {
      if (var != fixed) projected.vars.push_back(var);
    }
    out.entries.push_back(std::move(projected));
  }
  if (!seen) throw ContractError("fix_third_var: no entries contain variable '" + fixed + "'");
  out.summary = result.summary;
  out.median_df = result.median_df;
  out.max_df = result.max_df;
  return out;
}

std::string render_heatmap(const SweepResult& result, std::optional<double> max_scale,
                           const std::string& title, MeasureId by) {
  if (result.arity != 2) throw ContractError("render_heatmap: requires a two-way sweep");
  if (result.entries.empty()) throw ContractError("render_heatmap: empty sweep");

  // variable order: first appearance across the (lexicographically ordered)
  // combinations, which is the schema order the sweep enumerated
  std::vector<std::string> vars;
  std::set<std::string> seen;
  for (const auto& entry : result.entries) {
    for (const auto& var : entry.vars) {
      if (seen.insert(var).second) vars.push_back(var);
    }
  }
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = i;

  double top = 0.0;
  if (max_scale) {
    if (!(*max_scale > 0.0)) throw ContractError("render_heatmap: max_scale must be positive");
    top = *max_scale;
  } else {
    for (const auto& entry : result.entries) top = std::max(top, entry_value(entry, by));
    if (top <= 0.0) top = 1.0;
  }

  const int cell = 28;
  const int label_w = 110;
  const int title_h = 34;
  const int bottom_h = 110;
  const int legend_w = 96;
  const std::size_t m = vars.size();
  const int grid_w = static_cast<int>(m > 0 ? m - 1 : 0) * cell;
  const int grid_h = static_cast<int>(m > 0 ? m - 1 : 0) * cell;
  const int width = label_w + grid_w + legend_w + 20;
  const int height = title_h + grid_h + bottom_h;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<text x=\"" << label_w << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  // cells: pair (i, j) with i < j drawn at column i, row j-1
  for (const auto& entry : result.entries) {
    std::size_t a = pos[entry.vars[0]];
    std::size_t b = pos[entry.vars[1]];
    if (a > b) std::swap(a, b);
    const double value = entry_value(entry, by);
    const int x = label_w + static_cast<int>(a) * cell;
    const int y = title_h + static_cast<int>(b - 1) * cell;
    svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
        << "\" fill=\"" << kRamp[color_bin(value, top)]
        << "\" stroke=\"#ffffff\" stroke-width=\"1\">"
        << "<title>" << xml_escape(entry.vars[0]) << ":" << xml_escape(entry.vars[1]) << " "
        << measure_name(by) << " " << format_double(value) << "</title></rect>\n";
  }

  // row labels (variables 2..m), right-aligned at the grid's left edge
  for (std::size_t j = 1; j < m; ++j) {
    const int y = title_h + static_cast<int>(j - 1) * cell + cell / 2 + 4;
    svg << "<text x=\"" << (label_w - 6) << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << xml_escape(vars[j]) << "</text>\n";
  }
  // column labels (variables 1..m-1), rotated under the grid
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const int x = label_w + static_cast<int>(i) * cell + cell / 2;
    const int y = title_h + grid_h + 12;
    svg << "<text x=\"" << x << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" transform=\"rotate(-55 "
        << x << " " << y << ")\">" << xml_escape(vars[i]) << "</text>\n";
  }

  // legend: 9 bins bottom-to-top, value labels at both ends
  const int lx = label_w + grid_w + 24;
  const int lh = std::max(grid_h, 9 * 14);
  const int bin_h = lh / 9;
  for (int b = 0; b < 9; ++b) {
    const int y = title_h + lh - (b + 1) * bin_h;
    svg << "<rect x=\"" << lx << "\" y=\"" << y << "\" width=\"18\" height=\"" << bin_h
        << "\" fill=\"" << kRamp[b] << "\"/>\n";
  }
  svg << "<text x=\"" << (lx + 24) << "\" y=\"" << (title_h + 10)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(top) << "</text>\n";
  svg << "<text x=\"" << (lx + 24) << "\" y=\"" << (title_h + lh)
      << "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
  svg << "<text x=\"" << lx << "\" y=\"" << (title_h + lh + 16)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << measure_name(by) << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace synutil
