#include "ltd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ltd/error.hpp"

namespace ltd {

void SynthSpec::validate() const {
  if (n1 < 1 || n2 < 1 || n3 < 1 || b < 1)
    throw Error(ErrorCode::InvalidInput, "synth: dimensions and b must be >= 1");
  if (rank < 1 || rank > std::min(n1, n2))
    throw Error(ErrorCode::InvalidInput, "synth: rank must lie in [1, min(n1, n2)]");
  if (anomalies < 0 || anomalies * 10 >= n1 * n2)
    throw Error(ErrorCode::InvalidInput, "synth: anomaly count must be below n1 * n2 / 10");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidInput, "synth: sigma must be >= 0");
}

SynthData synth_dataset(const SynthSpec &spec) {
  spec.validate();
  const Index n1 = spec.n1, n2 = spec.n2, n3 = spec.n3, b = spec.b, r = spec.rank;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;

  SynthData out;
  // Endmember spectra: one smooth bump per column, centers spread over the
  // bands, peak value 1.
  out.B.resize(n3, b);
  const double spacing = static_cast<double>(n3) / static_cast<double>(b);
  for (Index c = 0; c < b; ++c) {
    const double center = (static_cast<double>(c) + 0.25 + 0.5 * unit(rng)) * spacing;
    const double width = std::max(1.0, (0.2 + 0.15 * unit(rng)) * spacing);
    for (Index k = 0; k < n3; ++k) {
      const double x = (static_cast<double>(k) - center) / width;
      out.B(k, c) = std::exp(-0.5 * x * x);
    }
  }

  std::vector<Eigen::VectorXd> tubes(static_cast<std::size_t>(r * r));
  // Each class is dominated by one randomly chosen endmember with a smaller
  // random admixture of the others.
  std::uniform_int_distribution<Index> pick(0, b - 1);
  for (auto &t : tubes) {
    t.resize(b);
    for (Index k = 0; k < b; ++k) t(k) = 0.02 + 0.15 * std::pow(unit(rng), 2.0);
    t(pick(rng)) += 1.0;
    t.normalize();
  }
  auto band = [r](Index i, Index n) { return std::min(r - 1, i * r / n); };

  out.L = Tensor3(n1, n2, b);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) {
      const auto &t = tubes[static_cast<std::size_t>(band(i, n1) * r + band(j, n2))];
      for (Index k = 0; k < b; ++k) out.L(i, j, k) = t(k);
    }

  out.E1 = Tensor3(n1, n2, n3);
  out.E2 = Tensor3(n1, n2, b);
  out.truth = GroundTruth(n1, n2);
  std::vector<Index> pixels(static_cast<std::size_t>(n1 * n2));
  std::iota(pixels.begin(), pixels.end(), Index{0});
  std::vector<Index> picked;
  std::sample(pixels.begin(), pixels.end(), std::back_inserter(picked), spec.anomalies, rng);

  for (Index p : picked) {
    const Index i = p / n2, j = p % n2;
    out.truth.set(i, j, true);

    Eigen::VectorXd u(b);
    for (Index k = 0; k < b; ++k) u(k) = out.L(i, j, k);
    const double d = 0.5 + unit(rng);
    if (b > 1) {
      // Rotate u within the plane of a random orthogonal direction so the
      // chord length |v - u| is d and v stays on the unit sphere.
      Eigen::VectorXd w(b);
      for (Index k = 0; k < b; ++k) w(k) = normal(rng);
      w -= w.dot(u) * u;
      w.normalize();
      const double theta = 2.0 * std::asin(d / 2.0);
      const Eigen::VectorXd v = std::cos(theta) * u + std::sin(theta) * w;
      for (Index k = 0; k < b; ++k) out.E2(i, j, k) = v(k) - u(k);
    } else {
      // On the unit "sphere" of R^1 the only other point is -u.
      out.E2(i, j, 0) = -2.0 * u(0);
    }

    Eigen::VectorXd e(n3);
    for (Index k = 0; k < n3; ++k) e(k) = normal(rng);
    e *= (0.2 + 0.6 * unit(rng)) / e.norm();
    for (Index k = 0; k < n3; ++k) out.E1(i, j, k) = e(k);
  }

  out.H = mode3_product(out.L + out.E2, out.B) + out.E1;
  if (spec.sigma > 0.0)
    for (double &v : out.H.values()) v += spec.sigma * normal(rng);
  return out;
}

} // namespace ltd
