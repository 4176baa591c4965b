#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace synutil {

enum class VarKind { categorical, numeric };

// Cell state tags for numeric columns. Values >= kSpecialBase index into the
// variable's special_codes list.
inline constexpr std::uint8_t kPresent = 0;
inline constexpr std::uint8_t kMissing = 1;
inline constexpr std::uint8_t kSpecialBase = 2;

struct Variable {
  std::string name;
  VarKind kind = VarKind::categorical;
  std::vector<std::string> levels;     // categorical only; unique, non-empty
  std::vector<double> special_codes;   // numeric only; e.g. -8 kept as its own group
  bool allow_missing = true;

  void validate() const;
  bool same_schema(const Variable& other) const;
};

// Column-major storage. Categorical columns use level codes with -1 for
// missing; numeric columns carry a value and a state tag per row.
struct Column {
  std::vector<std::int32_t> codes;  // categorical
  std::vector<double> values;       // numeric
  std::vector<std::uint8_t> tags;   // numeric
};

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Variable> variables, std::vector<Column> columns);

  std::size_t n_rows() const { return n_; }
  std::size_t n_vars() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(std::size_t v) const { return variables_[v]; }
  const Column& column(std::size_t v) const { return columns_[v]; }

  // Index of a named variable; throws ContractError when absent.
  std::size_t var_index(const std::string& name) const;

  // New dataset holding only the named variables, in the given order.
  Dataset select(const std::vector<std::string>& names) const;
  // First `count` variables, in schema order.
  Dataset head_vars(std::size_t count) const;

  bool same_schema(const Dataset& other) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Column> columns_;
  std::size_t n_ = 0;
};

// Sidecar schema document. Plain-text blocks separated by blank lines with
// fixed keys: name, kind (cat|num), levels (cat), na_codes (num).
std::vector<Variable> load_metadata(const std::string& path);
std::vector<Variable> parse_metadata(const std::string& text);
std::string format_metadata(const std::vector<Variable>& vars);

// RFC 4180 CSV with a required header row; empty field = missing. Unknown
// categorical labels and unparseable numerics are errors naming column/row.
Dataset load_csv(const std::string& path, const std::vector<Variable>& meta);
Dataset parse_csv(const std::string& text, const std::vector<Variable>& meta);
void save_csv(const Dataset& ds, const std::string& path);
std::string format_csv(const Dataset& ds);

struct BinningSpec {
  int groups = 5;                        // quantile groups; >= 2
  std::map<std::string, int> overrides;  // per-variable group counts

  int groups_for(const std::string& var) const;
  void validate() const;
};

// Quantile-bins every numeric variable into a categorical one: `groups` bins
// cut at the nearest-rank i/groups quantiles of the non-missing, non-special
// values (duplicate cut points merge), then one category per special code and
// one for missing. Cut points come from `cut_source` so that an
// original/synthetic pair shares a single partition; passing the dataset
// itself bins standalone data. Already-categorical variables pass through.
Dataset bin_numeric(const Dataset& ds, const BinningSpec& spec,
                    const Dataset& cut_source,
                    std::vector<std::string>* warnings = nullptr);
Dataset bin_numeric(const Dataset& ds, const BinningSpec& spec,
                    std::vector<std::string>* warnings = nullptr);

struct DatasetPair {
  Dataset original;
  Dataset synthetic;
  std::size_t n1 = 0;  // original rows
  std::size_t n2 = 0;  // synthetic rows
  std::size_t N = 0;   // n1 + n2
  double c = 0.0;      // synthetic fraction n2/N
};

// Validates that the two schemas agree (names, kinds, level sets, codes).
DatasetPair pair(Dataset original, Dataset synthetic);

// Binned copy of a pair: cut points from the original applied to both sides.
DatasetPair bin_pair(const DatasetPair& p, const BinningSpec& spec,
                     std::vector<std::string>* warnings = nullptr);

// Shortest round-trip decimal text for a double (used by CSV and reports so
// that identical values always serialize identically).
std::string format_double(double x);

}  // namespace synutil
