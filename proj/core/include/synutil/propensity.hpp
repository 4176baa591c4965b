#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synutil/dataset.hpp"
#include "synutil/measures.hpp"

namespace synutil {

// Dense design matrix for the propensity logistic regressions. Row-major,
// column 0 is the intercept.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;                // rows * cols
  std::vector<std::string> column_names;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Intercept + main effects + all interaction products of distinct variables
// up to `order`. Categorical variables are dummy-coded against their first
// level; a dummy is added for missing when the variable allows it. Numeric
// variables enter linearly, with one dummy per declared special code (and
// missing), their value slot contributing 0. Records come original block
// first, then synthetic.
DesignMatrix build_design(const DatasetPair& pair, int order);

enum class ModelKind { saturated_logistic, logistic_order_n, cart };

struct PropensityScores {
  std::vector<std::uint8_t> t;   // 1 = synthetic
  std::vector<double> p_hat;
  std::optional<long> df;        // non-aliased parameters minus intercept; absent for CART
  ModelKind model_kind = ModelKind::cart;
  double c = 0.0;                // synthetic fraction of the combined records

  // fit diagnostics (logistic)
  bool converged = true;
  bool clamped = false;          // separation: probabilities hit the clamp
  int iterations = 0;
  double deviance = 0.0;
  long columns_total = 0;
  long columns_aliased = 0;

  // fit diagnostics (cart)
  long tree_nodes = 0;
  long tree_leaves = 0;
  int tree_depth = 0;
};

struct CartParams {
  int min_split = 20;        // smallest node that may be split
  int min_leaf = 5;          // smallest allowed child
  int max_depth = 30;
  double complexity = 1e-4;  // minimum impurity decrease, relative to the root

  void validate() const;
};

struct ModelSpec {
  enum class Kind { logistic, cart };
  Kind kind = Kind::cart;
  int order = 2;  // logistic only; order == n_vars gives the saturated model
  CartParams cart;

  static ModelSpec logistic(int order);
  static ModelSpec cart_model(const CartParams& params = {});
};

// Maximum-likelihood logistic fit by iteratively reweighted least squares.
// Aliased (rank-deficient) columns are dropped before fitting and df reduced
// accordingly. Non-convergence keeps the last iterate and clears `converged`;
// probabilities are clamped to [1e-10, 1 - 1e-10] under separation.
PropensityScores fit_logistic(const DesignMatrix& design, const std::vector<std::uint8_t>& t);

// Greedy binary classification tree on the source indicator (Gini impurity).
// Categorical splits order levels by within-node synthetic proportion; ties
// break on the lowest variable index, then the earliest split position, so
// the tree is fully deterministic. `seed` is reserved (growing draws nothing).
PropensityScores fit_cart(const DatasetPair& pair, const CartParams& params, std::uint64_t seed);

// Convenience dispatcher over ModelSpec.
PropensityScores fit_model(const DatasetPair& pair, const ModelSpec& spec, std::uint64_t seed);

// Score-based utility measures (pMSE, PO50, SPECKS, U). The analytic
// S_pMSE = pMSE / (df c(1-c)^2 / N) is attached when df is known; with
// `require_analytic`, a CART fit (no df) is an error directing the caller to
// a resampling method.
UtilityResult score_utility(const PropensityScores& scores, const MeasureSet& measures,
                            bool require_analytic = false);

// A model with the combined features prepared once so it can be refit against
// many label vectors (the permutation null). fit() is const and safe to call
// concurrently.
class PreparedModel {
 public:
  static PreparedModel prepare(const DatasetPair& pair, const ModelSpec& spec);
  PropensityScores fit(const std::vector<std::uint8_t>& labels, std::uint64_t seed) const;
  const std::vector<std::uint8_t>& base_labels() const;

  PreparedModel(PreparedModel&&) noexcept;
  PreparedModel& operator=(PreparedModel&&) noexcept;
  ~PreparedModel();

 private:
  PreparedModel();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace synutil
