#pragma once

#include <cstdint>

#include "ltd/eval.hpp"
#include "ltd/tensor.hpp"

namespace ltd {

struct SynthSpec {
  Index n1 = 64;
  Index n2 = 64;
  Index n3 = 30;
  Index b = 3;
  Index rank = 3;
  Index anomalies = 40;
  double sigma = 0.01;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthData {
  Tensor3 H;
  GroundTruth truth;
  Tensor3 L;  ///< background coefficient layer, tubal rank `rank`, unit tubes
  Tensor3 E2; ///< spatial anomalies, L + E2 has unit tubes
  Tensor3 E1; ///< spectral anomalies
  Matrix B;   ///< n3 x b, one smooth non-negative bump per column
};

/// H = (L + E2) x_3 B + E1 + noise. The rows and columns of the scene are
/// split into `rank` contiguous bands each; every (row band, column band)
/// block shares one random non-negative unit tube, so each Fourier slice of L
/// factors as P U_k Q^T with r columns. Anomalous pixels get a rotated unit
/// tube (E2 norm in [0.5, 1.5]) plus a spectral tube (E1 norm in [0.2, 0.8]).
SynthData synth_dataset(const SynthSpec &spec);

} // namespace ltd
