#include <Eigen/Dense>
#include <cmath>

#include "synutil/errors.hpp"
#include "synutil/propensity.hpp"

namespace synutil {

namespace {

constexpr double kProbClamp = 1e-10;
constexpr double kAliasTol = 1e-10;     // relative to the largest column norm
constexpr double kDevianceTol = 1e-8;
constexpr int kMaxIterations = 100;

double sigmoid(double eta) {
  if (eta > 30.0) eta = 30.0;
  if (eta < -30.0) eta = -30.0;
  return 1.0 / (1.0 + std::exp(-eta));
}

double clamp_prob(double p) {
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}

}  // namespace

PropensityScores fit_logistic(const DesignMatrix& design, const std::vector<std::uint8_t>& t) {
  const std::size_t N = design.rows;
  if (t.size() != N) throw ContractError("fit_logistic: label length != design rows");
  if (design.cols == 0) throw ContractError("fit_logistic: empty design");

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
      design.data.data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(design.cols));

  // Alias detection: rank-revealing QR with a threshold relative to the
  // largest pivot. Kept columns are the pivot choices, restored to design
  // order so the reference coding stays readable.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kAliasTol);
  const Eigen::Index rank = qr.rank();
  std::vector<Eigen::Index> kept(qr.colsPermutation().indices().data(),
                                 qr.colsPermutation().indices().data() + rank);
  std::sort(kept.begin(), kept.end());

  Eigen::MatrixXd Xk(static_cast<Eigen::Index>(N), rank);
  for (Eigen::Index j = 0; j < rank; ++j) Xk.col(j) = X.col(kept[j]);

  Eigen::VectorXd y(static_cast<Eigen::Index>(N));
  double tsum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    y[static_cast<Eigen::Index>(i)] = t[i];
    tsum += t[i];
  }
  const double c = tsum / static_cast<double>(N);
  if (c <= 0.0 || c >= 1.0) throw ContractError("fit_logistic: labels are all one class");

  PropensityScores scores;
  scores.t = t;
  scores.model_kind = ModelKind::logistic_order_n;
  scores.c = c;
  scores.columns_total = static_cast<long>(design.cols);
  scores.columns_aliased = static_cast<long>(design.cols) - static_cast<long>(rank);
  scores.df = static_cast<long>(rank) - 1;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(rank);
  beta[0] = std::log(c / (1.0 - c));  // design column 0 is the intercept
  Eigen::VectorXd eta = Xk * beta;
  Eigen::VectorXd p(static_cast<Eigen::Index>(N));
  auto deviance_of = [&](const Eigen::VectorXd& probs) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      const double pi = clamp_prob(probs[i]);
      dev -= 2.0 * (y[i] * std::log(pi) + (1.0 - y[i]) * std::log(1.0 - pi));
    }
    return dev;
  };

  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = sigmoid(eta[i]);
  double dev = deviance_of(p);
  bool converged = false;
  int iter = 0;
  Eigen::VectorXd w(p.size()), z(p.size());
  while (iter < kMaxIterations) {
    ++iter;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double pi = clamp_prob(p[i]);
      const double wi = std::max(pi * (1.0 - pi), 1e-10);
      w[i] = std::sqrt(wi);
      z[i] = eta[i] + (y[i] - pi) / wi;
    }
    const Eigen::MatrixXd Xw = w.asDiagonal() * Xk;
    const Eigen::VectorXd zw = w.asDiagonal() * z;
    beta = Xw.colPivHouseholderQr().solve(zw);
    eta = Xk * beta;
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = sigmoid(eta[i]);
    const double new_dev = deviance_of(p);
    if (!std::isfinite(new_dev)) {
      throw NumericalError("fit_logistic: deviance diverged");
    }
    if (std::abs(dev - new_dev) < kDevianceTol) {
      dev = new_dev;
      converged = true;
      break;
    }
    dev = new_dev;
  }

  scores.converged = converged;
  scores.iterations = iter;
  scores.deviance = dev;
  scores.p_hat.resize(N);
  bool clamped = false;
  for (std::size_t i = 0; i < N; ++i) {
    const double pi = p[static_cast<Eigen::Index>(i)];
    const double pc = clamp_prob(pi);
    if (pc != pi) clamped = true;
    scores.p_hat[i] = pc;
  }
  scores.clamped = clamped;
  return scores;
}

}  // namespace synutil
