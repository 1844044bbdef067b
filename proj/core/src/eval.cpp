#include "ltd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltd/error.hpp"

namespace ltd {

namespace {

void check_inputs(const Map2D &score, const GroundTruth &gt) {
  if (score.rows() != gt.n1 || score.cols() != gt.n2)
    throw Error(ErrorCode::DimensionMismatch, "score map and ground truth differ in size");
  if (static_cast<Index>(gt.labels.size()) != gt.n1 * gt.n2)
    throw Error(ErrorCode::InvalidInput, "ground truth label count does not match its size");
  const Index pos = gt.positives();
  if (pos == 0 || pos == gt.n1 * gt.n2)
    throw Error(ErrorCode::InvalidInput, "ground truth must contain both classes");
  if (!score.allFinite()) throw Error(ErrorCode::NonFinite, "score map has non-finite values");
}

FiveNumber summarize(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return {v.front(), quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), v.back()};
}

} // namespace

Index GroundTruth::positives() const {
  return static_cast<Index>(std::count_if(labels.begin(), labels.end(), [](std::uint8_t l) { return l != 0; }));
}

std::vector<RocPoint> roc_curve(const Map2D &score, const GroundTruth &gt) {
  check_inputs(score, gt);
  const Index n = score.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const double *s = score.data();
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return s[a] > s[b]; });

  const double pos = static_cast<double>(gt.positives());
  const double neg = static_cast<double>(gt.negatives());
  std::vector<RocPoint> roc{{0.0, 0.0}};
  Index tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = s[order[k]];
    while (k < order.size() && s[order[k]] == threshold) {
      (gt.labels[static_cast<std::size_t>(order[k])] ? tp : fp) += 1;
      ++k;
    }
    roc.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
  }
  return roc;
}

double auc(const std::vector<RocPoint> &roc) {
  double area = 0.0;
  for (std::size_t k = 1; k < roc.size(); ++k)
    area += (roc[k].fpr - roc[k - 1].fpr) * 0.5 * (roc[k].tpr + roc[k - 1].tpr);
  return area;
}

double quantile(const std::vector<double> &sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidInput, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Separability separability_stats(const Map2D &score, const GroundTruth &gt) {
  check_inputs(score, gt);
  const double lo = score.minCoeff(), hi = score.maxCoeff();
  const double span = hi - lo;
  std::vector<double> bg, an;
  for (Index i = 0; i < gt.n1; ++i)
    for (Index j = 0; j < gt.n2; ++j) {
      const double v = span > 0.0 ? (score(i, j) - lo) / span : 0.0;
      (gt.anomaly(i, j) ? an : bg).push_back(v);
    }
  return {summarize(std::move(bg)), summarize(std::move(an))};
}

Map2D rx_baseline(const Tensor3 &h) {
  const Index n1 = h.n1(), n2 = h.n2(), n3 = h.n3();
  if (h.size() == 0) throw Error(ErrorCode::InvalidInput, "rx_baseline: empty cube");
  const Matrix x = mode3_unfold(h); // n3 x pixels
  const Eigen::VectorXd mu = x.rowwise().mean();
  const Matrix centered = x.colwise() - mu;
  Map2D out = Map2D::Zero(n1, n2);
  if (centered.cwiseAbs().maxCoeff() == 0.0) return out;

  Matrix cov = centered * centered.transpose() / static_cast<double>(x.cols());
  cov.diagonal().array() += 1e-6 * cov.trace() / static_cast<double>(n3);
  const Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NumericFailure, "rx_baseline: covariance is not positive definite");
  const Matrix solved = llt.solve(centered);
  for (Index p = 0; p < x.cols(); ++p) out(p / n2, p % n2) = centered.col(p).dot(solved.col(p));
  return out;
}

EvalReport evaluate(const Map2D &score, const GroundTruth &gt) {
  EvalReport r;
  r.roc = roc_curve(score, gt);
  r.auc = auc(r.roc);
  r.separability = separability_stats(score, gt);
  return r;
}

} // namespace ltd
