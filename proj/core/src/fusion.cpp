#include "ltd/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "ltd/error.hpp"

namespace ltd {

void GuidedFilterParams::validate() const {
  if (radius < 1) throw Error(ErrorCode::InvalidInput, "guided filter radius must be >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "guided filter eps must be > 0");
}

Map2D spectral_map(const Tensor3 &e1) { return tube_norms(e1); }

Map2D spatial_map(const Tensor3 &e2) { return tube_norms(e2); }

Map2D box_filter(const Map2D &m, Index radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidInput, "box_filter: radius must be >= 1");
  const Index rows = m.rows(), cols = m.cols();
  // sat(i, j) = sum of m over [0, i) x [0, j).
  Matrix sat = Matrix::Zero(rows + 1, cols + 1);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      sat(i + 1, j + 1) = m(i, j) + sat(i, j + 1) + sat(i + 1, j) - sat(i, j);

  Map2D out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Index r0 = std::max<Index>(0, i - radius), r1 = std::min(rows, i + radius + 1);
    for (Index j = 0; j < cols; ++j) {
      const Index c0 = std::max<Index>(0, j - radius), c1 = std::min(cols, j + radius + 1);
      const double sum = sat(r1, c1) - sat(r0, c1) - sat(r1, c0) + sat(r0, c0);
      out(i, j) = sum / static_cast<double>((r1 - r0) * (c1 - c0));
    }
  }
  return out;
}

Map2D guided_filter(const Map2D &input, const Map2D &guide, const GuidedFilterParams &params) {
  params.validate();
  if (input.rows() != guide.rows() || input.cols() != guide.cols())
    throw Error(ErrorCode::DimensionMismatch, "guided_filter: input and guide differ in size");
  const Index r = params.radius;
  const Map2D mean_i = box_filter(guide, r);
  const Map2D mean_p = box_filter(input, r);
  const Map2D corr_ip = box_filter(guide.cwiseProduct(input), r);
  const Map2D corr_ii = box_filter(guide.cwiseProduct(guide), r);

  const Map2D var_i = corr_ii - mean_i.cwiseProduct(mean_i);
  const Map2D cov_ip = corr_ip - mean_i.cwiseProduct(mean_p);
  const Map2D a = cov_ip.array() / (var_i.array() + params.eps);
  const Map2D b = mean_p - a.cwiseProduct(mean_i);
  return box_filter(a, r).cwiseProduct(guide) + box_filter(b, r);
}

Map2D min_max_normalize(const Map2D &m) {
  if (m.size() == 0) return m;
  const double lo = m.minCoeff(), hi = m.maxCoeff();
  if (!(hi > lo)) return Map2D::Zero(m.rows(), m.cols());
  return (m.array() - lo) / (hi - lo);
}

Map2D fuse(const Map2D &t1, const Map2D &t2, FusionMode mode, const GuidedFilterParams &params) {
  if (t1.rows() != t2.rows() || t1.cols() != t2.cols())
    throw Error(ErrorCode::DimensionMismatch, "fuse: T1 and T2 differ in size");
  const Map2D x = min_max_normalize(t1.cwiseProduct(t2));
  Map2D y = guided_filter(x, x, params);
  if (mode == FusionMode::Nested) {
    y = guided_filter(y, min_max_normalize(t1), params);
    y = guided_filter(y, min_max_normalize(t2), params);
  }
  return min_max_normalize(y);
}

} // namespace ltd
