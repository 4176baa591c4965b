#include <algorithm>
#include <cmath>

#include "model_internal.hpp"
#include "synutil/errors.hpp"
#include "synutil/propensity.hpp"

namespace synutil {

ModelSpec ModelSpec::logistic(int order) {
  ModelSpec spec;
  spec.kind = Kind::logistic;
  spec.order = order;
  return spec;
}

ModelSpec ModelSpec::cart_model(const CartParams& params) {
  ModelSpec spec;
  spec.kind = Kind::cart;
  spec.cart = params;
  return spec;
}

PropensityScores fit_model(const DatasetPair& pair, const ModelSpec& spec, std::uint64_t seed) {
  if (spec.kind == ModelSpec::Kind::cart) {
    return fit_cart(pair, spec.cart, seed);
  }
  const DesignMatrix design = build_design(pair, spec.order);
  std::vector<std::uint8_t> labels(pair.N, 0);
  for (std::size_t i = pair.n1; i < pair.N; ++i) labels[i] = 1;
  PropensityScores scores = fit_logistic(design, labels);
  if (static_cast<std::size_t>(spec.order) == pair.original.n_vars()) {
    scores.model_kind = ModelKind::saturated_logistic;
  }
  return scores;
}

UtilityResult score_utility(const PropensityScores& scores, const MeasureSet& measures,
                            bool require_analytic) {
  const std::size_t N = scores.p_hat.size();
  if (N == 0 || scores.t.size() != N) throw ContractError("score_utility: empty scores");
  for (MeasureId id : measures) {
    if (!score_measures().count(id)) {
      throw ContractError("measure '" + measure_name(id) +
                          "' is tabular-only; it cannot be computed from scores");
    }
  }
  if (require_analytic && !scores.df) {
    throw ContractError(
        "analytic standardization needs a fixed-df model; "
        "CART scores require a resampling method (perm or pairs)");
  }

  const double c = scores.c;
  double n1 = 0.0;
  double n2 = 0.0;
  for (std::uint8_t l : scores.t) (l ? n2 : n1) += 1.0;

  UtilityResult res;
  res.df = scores.df;

  if (measures.count(MeasureId::pMSE)) {
    double sum = 0.0;
    for (double p : scores.p_hat) sum += (p - c) * (p - c);
    MeasureValue mv;
    mv.raw = sum / static_cast<double>(N);
    if (scores.df) {
      mv.null_expectation =
          static_cast<double>(*scores.df) * c * (1 - c) * (1 - c) / static_cast<double>(N);
      if (*mv.null_expectation > 0) mv.standardized = mv.raw / *mv.null_expectation;
    }
    res.measures[MeasureId::pMSE] = mv;
  }
  if (measures.count(MeasureId::PO50)) {
    // records scored at exactly c count half, as in the tabular version
    double correct = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (scores.p_hat[i] > c) correct += scores.t[i];
      else if (scores.p_hat[i] < c) correct += 1 - scores.t[i];
      else correct += 0.5;
    }
    res.measures[MeasureId::PO50] = MeasureValue{100.0 * correct / static_cast<double>(N) - 50.0,
                                                 std::nullopt, std::nullopt};
  }
  if (measures.count(MeasureId::SPECKS) || measures.count(MeasureId::U)) {
    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores.p_hat[a] != scores.p_hat[b]) return scores.p_hat[a] < scores.p_hat[b];
      return a < b;
    });
    if (measures.count(MeasureId::SPECKS)) {
      // two-sample KS distance between the score CDFs by source; the gap
      // numerator o_cum*n2 - s_cum*n1 stays integral until the final division
      const auto in1 = static_cast<std::int64_t>(n1);
      const auto in2 = static_cast<std::int64_t>(n2);
      std::int64_t gap = 0;
      std::int64_t best = 0;
      std::size_t i = 0;
      while (i < N) {
        std::size_t j = i;
        while (j < N && scores.p_hat[order[j]] == scores.p_hat[order[i]]) {
          gap += scores.t[order[j]] ? -in1 : in2;
          ++j;
        }
        best = std::max(best, std::abs(gap));
        i = j;
      }
      res.measures[MeasureId::SPECKS] =
          MeasureValue{static_cast<double>(best) / (n1 * n2), std::nullopt, std::nullopt};
    }
    if (measures.count(MeasureId::U)) {
      // midrank sum over synthetic records
      double u = 0.0;
      std::size_t i = 0;
      while (i < N) {
        std::size_t j = i;
        std::size_t syn = 0;
        while (j < N && scores.p_hat[order[j]] == scores.p_hat[order[i]]) {
          syn += scores.t[order[j]];
          ++j;
        }
        const double midrank = static_cast<double>(i) + (static_cast<double>(j - i) + 1.0) / 2.0;
        u += static_cast<double>(syn) * midrank;
        i = j;
      }
      res.measures[MeasureId::U] = MeasureValue{u, std::nullopt, std::nullopt};
    }
  }
  return res;
}

struct PreparedModel::Impl {
  ModelSpec spec;
  std::size_t n_vars = 0;
  std::vector<std::uint8_t> base_labels;
  // logistic
  DesignMatrix design;
  // cart
  detail::CombinedFeatures combined;
};

PreparedModel::PreparedModel() : impl_(new Impl) {}
PreparedModel::PreparedModel(PreparedModel&&) noexcept = default;
PreparedModel& PreparedModel::operator=(PreparedModel&&) noexcept = default;
PreparedModel::~PreparedModel() = default;

PreparedModel PreparedModel::prepare(const DatasetPair& pair, const ModelSpec& spec) {
  PreparedModel model;
  model.impl_->spec = spec;
  model.impl_->n_vars = pair.original.n_vars();
  model.impl_->base_labels.assign(pair.N, 0);
  for (std::size_t i = pair.n1; i < pair.N; ++i) model.impl_->base_labels[i] = 1;
  if (spec.kind == ModelSpec::Kind::logistic) {
    model.impl_->design = build_design(pair, spec.order);
  } else {
    model.impl_->combined = detail::build_combined(pair);
  }
  return model;
}

PropensityScores PreparedModel::fit(const std::vector<std::uint8_t>& labels,
                                    std::uint64_t /*seed*/) const {
  if (impl_->spec.kind == ModelSpec::Kind::logistic) {
    PropensityScores scores = fit_logistic(impl_->design, labels);
    if (static_cast<std::size_t>(impl_->spec.order) == impl_->n_vars) {
      scores.model_kind = ModelKind::saturated_logistic;
    }
    return scores;
  }
  return detail::cart_grow(impl_->combined, labels, impl_->spec.cart);
}

const std::vector<std::uint8_t>& PreparedModel::base_labels() const {
  return impl_->base_labels;
}

}  // namespace synutil
