#pragma once

#include "ltd/tensor.hpp"

namespace ltd {

enum class FusionMode { Single, Nested };

struct GuidedFilterParams {
  Index radius = 2;
  double eps = 1e-2;

  void validate() const;
};

/// T1: per-pixel norm of the spectral anomaly tube E1(i, j, :).
Map2D spectral_map(const Tensor3 &e1);

/// T2: per-pixel norm of the spatial anomaly tube E2(i, j, :).
Map2D spatial_map(const Tensor3 &e2);

/// Mean over the (2 radius + 1)^2 window clipped to the image; the divisor is
/// the number of pixels actually inside. Integral image, O(n1 n2).
Map2D box_filter(const Map2D &m, Index radius);

/// Gray-scale guided filter with a local linear model per window.
Map2D guided_filter(const Map2D &input, const Map2D &guide, const GuidedFilterParams &params);

/// Affine rescale to [0, 1]. A constant map becomes all zeros.
Map2D min_max_normalize(const Map2D &m);

/// Hadamard product T1 o T2 filtered with itself as guide (Single), or that
/// result filtered again with T1 and then T2 as guides (Nested). Inputs are
/// scaled to [0, 1] before filtering; the output is scaled to [0, 1].
Map2D fuse(const Map2D &t1, const Map2D &t2, FusionMode mode, const GuidedFilterParams &params);

} // namespace ltd
