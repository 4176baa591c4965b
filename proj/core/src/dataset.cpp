#include "synutil/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "synutil/errors.hpp"

namespace synutil {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot open file for writing: " + path);
  out << text;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw ContractError("unparseable number '" + t + "' in " + context);
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void Variable::validate() const {
  if (name.empty()) throw ContractError("variable with empty name");
  if (kind == VarKind::categorical) {
    if (levels.empty()) {
      throw ContractError("categorical variable '" + name + "' has no levels");
    }
    std::set<std::string> seen;
    for (const auto& lv : levels) {
      if (lv.empty()) {
        throw ContractError("categorical variable '" + name + "' has an empty level");
      }
      if (!seen.insert(lv).second) {
        throw ContractError("categorical variable '" + name + "' has duplicate level '" + lv + "'");
      }
    }
    if (!special_codes.empty()) {
      throw ContractError("special codes apply only to numeric variables ('" + name + "')");
    }
  } else {
    std::set<double> seen(special_codes.begin(), special_codes.end());
    if (seen.size() != special_codes.size()) {
      throw ContractError("numeric variable '" + name + "' has duplicate special codes");
    }
  }
}

bool Variable::same_schema(const Variable& other) const {
  return name == other.name && kind == other.kind && levels == other.levels &&
         special_codes == other.special_codes;
}

Dataset::Dataset(std::vector<Variable> variables, std::vector<Column> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
  if (variables_.size() != columns_.size()) {
    throw ContractError("dataset: variable/column count mismatch");
  }
  n_ = 0;
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    variables_[v].validate();
    const Column& col = columns_[v];
    const std::size_t rows = variables_[v].kind == VarKind::categorical
                                 ? col.codes.size()
                                 : col.values.size();
    if (v == 0) n_ = rows;
    if (rows != n_) throw ContractError("dataset: ragged columns");
    if (variables_[v].kind == VarKind::categorical) {
      const auto nlev = static_cast<std::int32_t>(variables_[v].levels.size());
      for (std::int32_t code : col.codes) {
        if (code < -1 || code >= nlev) {
          throw ContractError("dataset: level code out of range in '" + variables_[v].name + "'");
        }
        if (code == -1 && !variables_[v].allow_missing) {
          throw ContractError("dataset: missing value in '" + variables_[v].name +
                              "' which does not allow missing");
        }
      }
    } else {
      if (col.tags.size() != col.values.size()) {
        throw ContractError("dataset: numeric column tag/value size mismatch");
      }
      const auto ncodes = static_cast<std::uint8_t>(variables_[v].special_codes.size());
      for (std::uint8_t tag : col.tags) {
        if (tag >= kSpecialBase && tag - kSpecialBase >= ncodes) {
          throw ContractError("dataset: special-code tag out of range in '" +
                              variables_[v].name + "'");
        }
      }
    }
  }
}

std::size_t Dataset::var_index(const std::string& name) const {
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (variables_[v].name == name) return v;
  }
  throw ContractError("no such variable: '" + name + "'");
}

Dataset Dataset::select(const std::vector<std::string>& names) const {
  std::vector<Variable> vars;
  std::vector<Column> cols;
  for (const auto& nm : names) {
    const std::size_t v = var_index(nm);
    vars.push_back(variables_[v]);
    cols.push_back(columns_[v]);
  }
  return Dataset(std::move(vars), std::move(cols));
}

Dataset Dataset::head_vars(std::size_t count) const {
  if (count > n_vars()) throw ContractError("head_vars: not enough variables");
  std::vector<Variable> vars(variables_.begin(), variables_.begin() + count);
  std::vector<Column> cols(columns_.begin(), columns_.begin() + count);
  return Dataset(std::move(vars), std::move(cols));
}

bool Dataset::same_schema(const Dataset& other) const {
  if (n_vars() != other.n_vars()) return false;
  for (std::size_t v = 0; v < n_vars(); ++v) {
    if (!variables_[v].same_schema(other.variables_[v])) return false;
  }
  return true;
}

std::vector<Variable> parse_metadata(const std::string& text) {
  std::vector<Variable> vars;
  std::optional<Variable> cur;
  bool kind_seen = false;

  auto flush = [&]() {
    if (!cur) return;
    if (!kind_seen) {
      throw ContractError("metadata: variable '" + cur->name + "' missing 'kind'");
    }
    cur->validate();
    vars.push_back(*cur);
    cur.reset();
    kind_seen = false;
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw ContractError("metadata line " + std::to_string(lineno) + ": expected 'key: value'");
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "name") {
      flush();
      cur = Variable{};
      cur->name = value;
    } else if (!cur) {
      throw ContractError("metadata line " + std::to_string(lineno) + ": '" + key +
                          "' before any 'name'");
    } else if (key == "kind") {
      if (value == "cat") {
        cur->kind = VarKind::categorical;
      } else if (value == "num") {
        cur->kind = VarKind::numeric;
      } else {
        throw ContractError("metadata: kind must be 'cat' or 'num', got '" + value + "'");
      }
      kind_seen = true;
    } else if (key == "levels") {
      cur->levels = split_list(value);
    } else if (key == "na_codes") {
      for (const auto& item : split_list(value)) {
        cur->special_codes.push_back(parse_double(item, "metadata na_codes of '" + cur->name + "'"));
      }
    } else {
      throw ContractError("metadata line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  flush();
  if (vars.empty()) throw ContractError("metadata: no variables declared");
  return vars;
}

std::vector<Variable> load_metadata(const std::string& path) {
  return parse_metadata(read_file(path));
}

std::string format_metadata(const std::vector<Variable>& vars) {
  std::ostringstream out;
  bool first = true;
  for (const auto& v : vars) {
    if (!first) out << "\n";
    first = false;
    out << "name: " << v.name << "\n";
    out << "kind: " << (v.kind == VarKind::categorical ? "cat" : "num") << "\n";
    if (v.kind == VarKind::categorical) {
      out << "levels: ";
      for (std::size_t i = 0; i < v.levels.size(); ++i) {
        if (i) out << ",";
        out << v.levels[i];
      }
      out << "\n";
    } else if (!v.special_codes.empty()) {
      out << "na_codes: ";
      for (std::size_t i = 0; i < v.special_codes.size(); ++i) {
        if (i) out << ",";
        out << format_double(v.special_codes[i]);
      }
      out << "\n";
    }
  }
  return out.str();
}

namespace {

// RFC 4180 row reader: quoted fields, doubled quotes, CRLF line ends, and
// newlines inside quoted fields.
class CsvReader {
 public:
  explicit CsvReader(const std::string& text) : text_(text) {}

  bool next_row(std::vector<std::string>& fields) {
    fields.clear();
    if (pos_ >= text_.size()) return false;
    std::string field;
    bool quoted = false;
    for (;;) {
      if (pos_ >= text_.size()) {
        fields.push_back(std::move(field));
        return true;
      }
      const char ch = text_[pos_++];
      if (quoted) {
        if (ch == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty()) {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(std::move(field));
        return true;
      } else {
        field.push_back(ch);
      }
    }
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::vector<Variable>& meta) {
  for (const auto& v : meta) v.validate();
  CsvReader reader(text);
  std::vector<std::string> fields;
  if (!reader.next_row(fields)) throw ContractError("csv: empty file (header required)");
  if (fields.size() != meta.size()) {
    throw ContractError("csv: header has " + std::to_string(fields.size()) +
                        " columns, metadata declares " + std::to_string(meta.size()));
  }
  for (std::size_t v = 0; v < meta.size(); ++v) {
    if (fields[v] != meta[v].name) {
      throw ContractError("csv: header column " + std::to_string(v + 1) + " is '" + fields[v] +
                          "', metadata declares '" + meta[v].name + "'");
    }
  }

  std::vector<Column> cols(meta.size());
  // level label -> code lookup per categorical variable
  std::vector<std::map<std::string, std::int32_t>> lookup(meta.size());
  for (std::size_t v = 0; v < meta.size(); ++v) {
    for (std::size_t l = 0; l < meta[v].levels.size(); ++l) {
      lookup[v][meta[v].levels[l]] = static_cast<std::int32_t>(l);
    }
  }

  std::size_t row = 0;
  while (reader.next_row(fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (fields.size() != meta.size()) {
      throw ContractError("csv row " + std::to_string(row) + ": expected " +
                          std::to_string(meta.size()) + " fields, got " +
                          std::to_string(fields.size()));
    }
    for (std::size_t v = 0; v < meta.size(); ++v) {
      const std::string& cell = fields[v];
      if (meta[v].kind == VarKind::categorical) {
        if (cell.empty()) {
          if (!meta[v].allow_missing) {
            throw ContractError("csv row " + std::to_string(row) + ", column '" + meta[v].name +
                                "': missing value not allowed");
          }
          cols[v].codes.push_back(-1);
        } else {
          auto it = lookup[v].find(cell);
          if (it == lookup[v].end()) {
            throw ContractError("csv row " + std::to_string(row) + ", column '" + meta[v].name +
                                "': label '" + cell + "' is not a declared level");
          }
          cols[v].codes.push_back(it->second);
        }
      } else {
        if (cell.empty()) {
          if (!meta[v].allow_missing) {
            throw ContractError("csv row " + std::to_string(row) + ", column '" + meta[v].name +
                                "': missing value not allowed");
          }
          cols[v].values.push_back(0.0);
          cols[v].tags.push_back(kMissing);
        } else {
          const double x = parse_double(cell, "csv row " + std::to_string(row) + ", column '" +
                                                  meta[v].name + "'");
          std::uint8_t tag = kPresent;
          for (std::size_t s = 0; s < meta[v].special_codes.size(); ++s) {
            if (x == meta[v].special_codes[s]) {
              tag = static_cast<std::uint8_t>(kSpecialBase + s);
              break;
            }
          }
          cols[v].values.push_back(tag == kPresent ? x : 0.0);
          cols[v].tags.push_back(tag);
        }
      }
    }
  }
  return Dataset(meta, std::move(cols));
}

Dataset load_csv(const std::string& path, const std::vector<Variable>& meta) {
  return parse_csv(read_file(path), meta);
}

std::string format_csv(const Dataset& ds) {
  std::ostringstream out;
  for (std::size_t v = 0; v < ds.n_vars(); ++v) {
    if (v) out << ",";
    out << csv_escape(ds.variable(v).name);
  }
  out << "\n";
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t v = 0; v < ds.n_vars(); ++v) {
      if (v) out << ",";
      const Variable& var = ds.variable(v);
      const Column& col = ds.column(v);
      if (var.kind == VarKind::categorical) {
        const std::int32_t code = col.codes[r];
        if (code >= 0) out << csv_escape(var.levels[code]);
      } else {
        const std::uint8_t tag = col.tags[r];
        if (tag == kPresent) {
          out << format_double(col.values[r]);
        } else if (tag >= kSpecialBase) {
          out << format_double(var.special_codes[tag - kSpecialBase]);
        }
        // missing stays empty
      }
    }
    out << "\n";
  }
  return out.str();
}

void save_csv(const Dataset& ds, const std::string& path) {
  write_file(path, format_csv(ds));
}

int BinningSpec::groups_for(const std::string& var) const {
  auto it = overrides.find(var);
  return it == overrides.end() ? groups : it->second;
}

void BinningSpec::validate() const {
  if (groups < 2) throw ContractError("binning: groups must be >= 2");
  for (const auto& [name, g] : overrides) {
    if (g < 2) throw ContractError("binning: groups override for '" + name + "' must be >= 2");
  }
}

namespace {

// Nearest-rank quantile cut points at i/groups, duplicates merged.
std::vector<double> quantile_cuts(std::vector<double> values, int groups) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::vector<double> cuts;
  for (int i = 1; i < groups; ++i) {
    const double p = static_cast<double>(i) / groups;
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    cuts.push_back(values[rank - 1]);
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // a cut equal to the maximum produces an empty top bin; drop it
  while (!cuts.empty() && cuts.back() >= values.back()) cuts.pop_back();
  return cuts;
}

std::vector<std::string> bin_labels(const std::vector<double>& cuts) {
  if (cuts.empty()) return {"all"};
  std::vector<std::string> labels;
  labels.push_back("<=" + format_double(cuts.front()));
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    labels.push_back("(" + format_double(cuts[i - 1]) + "," + format_double(cuts[i]) + "]");
  }
  labels.push_back(">" + format_double(cuts.back()));
  return labels;
}

std::int32_t bin_of(double x, const std::vector<double>& cuts) {
  // first bin whose upper cut is >= x; values above all cuts go to the last bin
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), x);
  return static_cast<std::int32_t>(it - cuts.begin());
}

}  // namespace

Dataset bin_numeric(const Dataset& ds, const BinningSpec& spec, const Dataset& cut_source,
                    std::vector<std::string>* warnings) {
  spec.validate();
  if (!ds.same_schema(cut_source)) {
    throw ContractError("bin_numeric: cut-point source schema differs from data schema");
  }
  std::vector<Variable> vars;
  std::vector<Column> cols;
  for (std::size_t v = 0; v < ds.n_vars(); ++v) {
    const Variable& var = ds.variable(v);
    if (var.kind == VarKind::categorical) {
      vars.push_back(var);
      cols.push_back(ds.column(v));
      continue;
    }
    std::vector<double> present;
    const Column& src = cut_source.column(v);
    for (std::size_t r = 0; r < cut_source.n_rows(); ++r) {
      if (src.tags[r] == kPresent) present.push_back(src.values[r]);
    }
    if (present.empty()) {
      throw ContractError("bin_numeric: variable '" + var.name + "' has no non-missing values");
    }
    const int groups = spec.groups_for(var.name);
    const std::vector<double> cuts = quantile_cuts(present, groups);
    if (warnings && static_cast<int>(cuts.size()) + 1 < groups) {
      warnings->push_back("variable '" + var.name + "': tied quantiles merged, " +
                          std::to_string(cuts.size() + 1) + " bins instead of " +
                          std::to_string(groups));
    }

    Variable binned;
    binned.name = var.name;
    binned.kind = VarKind::categorical;
    binned.levels = bin_labels(cuts);
    const auto first_special = static_cast<std::int32_t>(binned.levels.size());
    for (double code : var.special_codes) {
      binned.levels.push_back("code:" + format_double(code));
    }
    binned.allow_missing = var.allow_missing;
    const std::int32_t missing_level =
        var.allow_missing ? static_cast<std::int32_t>(binned.levels.size()) : -1;
    if (var.allow_missing) binned.levels.push_back("missing");

    Column out;
    const Column& col = ds.column(v);
    out.codes.reserve(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
      const std::uint8_t tag = col.tags[r];
      if (tag == kPresent) {
        out.codes.push_back(bin_of(col.values[r], cuts));
      } else if (tag == kMissing) {
        out.codes.push_back(missing_level);
      } else {
        out.codes.push_back(first_special + (tag - kSpecialBase));
      }
    }
    vars.push_back(std::move(binned));
    cols.push_back(std::move(out));
  }
  return Dataset(std::move(vars), std::move(cols));
}

Dataset bin_numeric(const Dataset& ds, const BinningSpec& spec,
                    std::vector<std::string>* warnings) {
  return bin_numeric(ds, spec, ds, warnings);
}

DatasetPair pair(Dataset original, Dataset synthetic) {
  if (!original.same_schema(synthetic)) {
    std::string detail;
    if (original.n_vars() != synthetic.n_vars()) {
      detail = "variable counts differ (" + std::to_string(original.n_vars()) + " vs " +
               std::to_string(synthetic.n_vars()) + ")";
    } else {
      for (std::size_t v = 0; v < original.n_vars(); ++v) {
        if (!original.variable(v).same_schema(synthetic.variable(v))) {
          detail = "variable '" + original.variable(v).name + "' differs";
          break;
        }
      }
    }
    throw ContractError("pair: schema mismatch: " + detail);
  }
  DatasetPair p;
  p.n1 = original.n_rows();
  p.n2 = synthetic.n_rows();
  p.N = p.n1 + p.n2;
  if (p.N == 0) throw ContractError("pair: both datasets are empty");
  p.c = static_cast<double>(p.n2) / static_cast<double>(p.N);
  p.original = std::move(original);
  p.synthetic = std::move(synthetic);
  return p;
}

DatasetPair bin_pair(const DatasetPair& p, const BinningSpec& spec,
                     std::vector<std::string>* warnings) {
  Dataset orig = bin_numeric(p.original, spec, p.original, warnings);
  Dataset syn = bin_numeric(p.synthetic, spec, p.original, nullptr);
  return pair(std::move(orig), std::move(syn));
}

}  // namespace synutil
