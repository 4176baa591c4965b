#include <algorithm>
#include <cmath>

#include "model_internal.hpp"
#include "synutil/errors.hpp"

namespace synutil {

void CartParams::validate() const {
  if (min_split < 2) throw ContractError("cart: min_split must be >= 2");
  if (min_leaf < 1) throw ContractError("cart: min_leaf must be >= 1");
  if (max_depth < 1) throw ContractError("cart: max_depth must be >= 1");
  if (complexity < 0) throw ContractError("cart: complexity must be >= 0");
}

namespace detail {

CombinedFeatures build_combined(const DatasetPair& pair) {
  CombinedFeatures out;
  out.n1 = pair.n1;
  out.n2 = pair.n2;
  out.n_records = pair.N;
  const std::size_t nvars = pair.original.n_vars();
  out.features.resize(nvars);
  for (std::size_t v = 0; v < nvars; ++v) {
    const Variable& var = pair.original.variable(v);
    CombinedFeatures::Feature& f = out.features[v];
    if (var.kind == VarKind::categorical) {
      f.categorical = true;
      f.n_levels = static_cast<std::int32_t>(var.levels.size()) + (var.allow_missing ? 1 : 0);
      f.codes.reserve(out.n_records);
      auto push = [&](const Dataset& ds) {
        const Column& col = ds.column(v);
        for (std::int32_t code : col.codes) {
          f.codes.push_back(code >= 0 ? code : f.n_levels - 1);
        }
      };
      push(pair.original);
      push(pair.synthetic);
    } else {
      f.categorical = false;
      f.keys.reserve(out.n_records);
      auto push = [&](const Dataset& ds) {
        const Column& col = ds.column(v);
        for (std::size_t r = 0; r < ds.n_rows(); ++r) {
          NumericKey key;
          if (col.tags[r] == kPresent) {
            key.cls = 255;
            key.value = col.values[r];
          } else if (col.tags[r] == kMissing) {
            key.cls = 0;
          } else {
            key.cls = static_cast<std::uint8_t>(1 + (col.tags[r] - kSpecialBase));
          }
          f.keys.push_back(key);
        }
      };
      push(pair.original);
      push(pair.synthetic);
    }
  }
  return out;
}

namespace {

// Count-weighted Gini impurity of a node: 2 * syn * (n - syn) / n.
double impurity(double syn, double n) {
  if (n <= 0) return 0.0;
  return 2.0 * syn * (n - syn) / n;
}

struct BestSplit {
  bool found = false;
  double gain = 0.0;
  std::size_t var = 0;
  // categorical: the set of level codes routed left; numeric: go left when
  // key <= threshold key
  std::vector<std::int32_t> left_levels;
  NumericKey threshold;
};

class Grower {
 public:
  Grower(const CombinedFeatures& data, const std::vector<std::uint8_t>& labels,
         const CartParams& params)
      : data_(data), labels_(labels), params_(params) {
    index_.resize(data.n_records);
    for (std::size_t i = 0; i < index_.size(); ++i) index_[i] = i;
  }

  PropensityScores run() {
    PropensityScores scores;
    scores.model_kind = ModelKind::cart;
    scores.t = labels_;
    scores.p_hat.assign(data_.n_records, 0.0);

    double syn = 0.0;
    for (std::uint8_t l : labels_) syn += l;
    scores.c = syn / static_cast<double>(data_.n_records);
    root_impurity_ = impurity(syn, static_cast<double>(data_.n_records));
    min_gain_ = params_.complexity * root_impurity_;

    grow(0, data_.n_records, 0, scores);
    return scores;
  }

 private:
  void grow(std::size_t begin, std::size_t end, int depth, PropensityScores& scores) {
    const double n = static_cast<double>(end - begin);
    double syn = 0.0;
    for (std::size_t i = begin; i < end; ++i) syn += labels_[index_[i]];
    const double p = syn / n;

    ++scores.tree_nodes;
    scores.tree_depth = std::max(scores.tree_depth, depth);

    BestSplit best;
    if (depth < params_.max_depth && end - begin >= static_cast<std::size_t>(params_.min_split) &&
        syn > 0.0 && syn < n) {
      best = find_split(begin, end, syn);
    }
    if (!best.found) {
      ++scores.tree_leaves;
      for (std::size_t i = begin; i < end; ++i) scores.p_hat[index_[i]] = p;
      return;
    }

    const std::size_t mid = partition(begin, end, best);
    grow(begin, mid, depth + 1, scores);
    grow(mid, end, depth + 1, scores);
  }

  BestSplit find_split(std::size_t begin, std::size_t end, double node_syn) {
    const double n = static_cast<double>(end - begin);
    const double parent = impurity(node_syn, n);
    BestSplit best;
    for (std::size_t v = 0; v < data_.features.size(); ++v) {
      const auto& f = data_.features[v];
      if (f.categorical) {
        scan_categorical(begin, end, v, f, parent, best);
      } else {
        scan_numeric(begin, end, v, f, parent, best);
      }
    }
    return best;
  }

  void consider(double gain, std::size_t var, BestSplit& best,
                const std::vector<std::int32_t>* left_levels, const NumericKey* threshold) {
    // strictly-greater keeps the earliest candidate on ties: lowest variable
    // index, then earliest split position in enumeration order
    if (gain < min_gain_ || gain <= best.gain || gain <= 0.0) return;
    best.found = true;
    best.gain = gain;
    best.var = var;
    if (left_levels) {
      best.left_levels = *left_levels;
      best.threshold = NumericKey{};
    } else {
      best.left_levels.clear();
      best.threshold = *threshold;
    }
  }

  void scan_categorical(std::size_t begin, std::size_t end, std::size_t v,
                        const CombinedFeatures::Feature& f, double parent, BestSplit& best) {
    const std::size_t L = static_cast<std::size_t>(f.n_levels);
    counts_tot_.assign(L, 0.0);
    counts_syn_.assign(L, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t rec = index_[i];
      const auto code = static_cast<std::size_t>(f.codes[rec]);
      counts_tot_[code] += 1.0;
      counts_syn_[code] += labels_[rec];
    }
    // order present levels by synthetic proportion (ties by level code); the
    // optimal binary partition for a binary response is a prefix of this order
    order_.clear();
    for (std::size_t l = 0; l < L; ++l) {
      if (counts_tot_[l] > 0) order_.push_back(static_cast<std::int32_t>(l));
    }
    if (order_.size() < 2) return;
    std::sort(order_.begin(), order_.end(), [&](std::int32_t a, std::int32_t b) {
      const double pa = counts_syn_[a] / counts_tot_[a];
      const double pb = counts_syn_[b] / counts_tot_[b];
      if (pa != pb) return pa < pb;
      return a < b;
    });

    const double n = static_cast<double>(end - begin);
    double node_syn = 0.0;
    for (std::size_t l = 0; l < L; ++l) node_syn += counts_syn_[l];

    double left_n = 0.0;
    double left_syn = 0.0;
    std::vector<std::int32_t> left;
    for (std::size_t pos = 0; pos + 1 < order_.size(); ++pos) {
      const std::int32_t lev = order_[pos];
      left_n += counts_tot_[lev];
      left_syn += counts_syn_[lev];
      left.push_back(lev);
      if (left_n < params_.min_leaf || n - left_n < params_.min_leaf) continue;
      const double gain =
          parent - impurity(left_syn, left_n) - impurity(node_syn - left_syn, n - left_n);
      consider(gain, v, best, &left, nullptr);
    }
  }

  void scan_numeric(std::size_t begin, std::size_t end, std::size_t v,
                    const CombinedFeatures::Feature& f, double parent, BestSplit& best) {
    sorted_.assign(index_.begin() + static_cast<std::ptrdiff_t>(begin),
                   index_.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(sorted_.begin(), sorted_.end(), [&](std::size_t a, std::size_t b) {
      if (f.keys[a] == f.keys[b]) return a < b;
      return f.keys[a] < f.keys[b];
    });
    const double n = static_cast<double>(end - begin);
    double node_syn = 0.0;
    for (std::size_t i = begin; i < end; ++i) node_syn += labels_[index_[i]];

    double left_n = 0.0;
    double left_syn = 0.0;
    for (std::size_t i = 0; i + 1 < sorted_.size(); ++i) {
      left_n += 1.0;
      left_syn += labels_[sorted_[i]];
      if (f.keys[sorted_[i]] == f.keys[sorted_[i + 1]]) continue;  // not a boundary
      if (left_n < params_.min_leaf || n - left_n < params_.min_leaf) continue;
      const double gain =
          parent - impurity(left_syn, left_n) - impurity(node_syn - left_syn, n - left_n);
      const NumericKey threshold = f.keys[sorted_[i]];
      consider(gain, v, best, nullptr, &threshold);
    }
  }

  std::size_t partition(std::size_t begin, std::size_t end, const BestSplit& split) {
    const auto& f = data_.features[split.var];
    auto goes_left = [&](std::size_t rec) {
      if (f.categorical) {
        return std::find(split.left_levels.begin(), split.left_levels.end(), f.codes[rec]) !=
               split.left_levels.end();
      }
      return f.keys[rec] < split.threshold || f.keys[rec] == split.threshold;
    };
    // stable partition keeps record order deterministic within children
    scratch_.clear();
    std::size_t mid = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (goes_left(index_[i])) scratch_.push_back(index_[i]);
    }
    const std::size_t left_count = scratch_.size();
    for (std::size_t i = begin; i < end; ++i) {
      if (!goes_left(index_[i])) scratch_.push_back(index_[i]);
    }
    std::copy(scratch_.begin(), scratch_.end(), index_.begin() + static_cast<std::ptrdiff_t>(begin));
    mid = begin + left_count;
    return mid;
  }

  const CombinedFeatures& data_;
  const std::vector<std::uint8_t>& labels_;
  const CartParams& params_;
  std::vector<std::size_t> index_;
  double root_impurity_ = 0.0;
  double min_gain_ = 0.0;

  // scratch buffers
  std::vector<double> counts_tot_, counts_syn_;
  std::vector<std::int32_t> order_;
  std::vector<std::size_t> sorted_, scratch_;
};

}  // namespace

PropensityScores cart_grow(const CombinedFeatures& data, const std::vector<std::uint8_t>& labels,
                           const CartParams& params) {
  params.validate();
  if (labels.size() != data.n_records) throw ContractError("cart: label length mismatch");
  Grower grower(data, labels, params);
  return grower.run();
}

}  // namespace detail

PropensityScores fit_cart(const DatasetPair& pair, const CartParams& params,
                          std::uint64_t /*seed: reserved, growing is deterministic*/) {
  const detail::CombinedFeatures data = detail::build_combined(pair);
  std::vector<std::uint8_t> labels(pair.N, 0);
  for (std::size_t i = pair.n1; i < pair.N; ++i) labels[i] = 1;
  return detail::cart_grow(data, labels, params);
}

}  // namespace synutil
