#pragma once

#include <cstdint>
#include <vector>

#include "ltd/tensor.hpp"

namespace ltd {

/// Binary per-pixel labels, row-major; 1 marks an anomaly.
struct GroundTruth {
  Index n1 = 0;
  Index n2 = 0;
  std::vector<std::uint8_t> labels;

  GroundTruth() = default;
  GroundTruth(Index rows, Index cols)
    : n1(rows), n2(cols), labels(static_cast<std::size_t>(rows * cols), 0) {}

  bool anomaly(Index i, Index j) const { return labels[static_cast<std::size_t>(i * n2 + j)] != 0; }
  void set(Index i, Index j, bool a) { labels[static_cast<std::size_t>(i * n2 + j)] = a ? 1 : 0; }
  Index positives() const;
  Index negatives() const { return n1 * n2 - positives(); }
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// One point per distinct score value, thresholds in descending order,
/// starting at (0, 0) and ending at (1, 1). Tied scores move together.
std::vector<RocPoint> roc_curve(const Map2D &score, const GroundTruth &gt);

/// Trapezoidal area under the curve.
double auc(const std::vector<RocPoint> &roc);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct Separability {
  FiveNumber background;
  FiveNumber anomaly;
};

/// Quantile by linear interpolation between order statistics (type 7).
/// `sorted` must be ascending and non-empty.
double quantile(const std::vector<double> &sorted, double q);

/// Five-number summaries of the min-max normalized scores per class.
Separability separability_stats(const Map2D &score, const GroundTruth &gt);

/// Global RX detector: Mahalanobis distance of each pixel spectrum to the
/// scene mean, with covariance regularized by 1e-6 * trace / n3 on the
/// diagonal.
Map2D rx_baseline(const Tensor3 &h);

struct EvalReport {
  std::vector<RocPoint> roc;
  double auc = 0.0;
  Separability separability;
};

EvalReport evaluate(const Map2D &score, const GroundTruth &gt);

} // namespace ltd
