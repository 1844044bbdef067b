#pragma once

// Random generators and brute-force reference implementations shared by the
// unit and acceptance tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ltd/eval.hpp"
#include "ltd/prox.hpp"
#include "ltd/tensor.hpp"

namespace ltd::testing {

using Rng = std::mt19937_64;

inline Tensor3 random_tensor(Rng &rng, Index n1, Index n2, Index n3, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Tensor3 t(n1, n2, n3);
  for (double &v : t.values()) v = g(rng);
  return t;
}

inline Matrix random_matrix(Rng &rng, Index rows, Index cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

inline Map2D random_map(Rng &rng, Index n1, Index n2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Map2D m(n1, n2);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) m(i, j) = u(rng);
  return m;
}

inline Index uniform_index(Rng &rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Direct O(n3^2) DFT along mode 3.
inline std::vector<std::complex<double>> naive_dft_tube(const Tensor3 &x, Index i, Index j) {
  const Index n3 = x.n3();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n3));
  const double pi = std::acos(-1.0);
  for (Index k = 0; k < n3; ++k) {
    std::complex<double> acc = 0.0;
    for (Index l = 0; l < n3; ++l)
      acc += x(i, j, l) * std::polar(1.0, -2.0 * pi * static_cast<double>(k * l) / static_cast<double>(n3));
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

/// Circular-convolution definition of the t-product, written independently
/// of the library's block-circulant oracle.
inline Tensor3 naive_tprod(const Tensor3 &x, const Tensor3 &y) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3(), n4 = y.n2();
  Tensor3 out(n1, n4, n3);
  for (Index k = 0; k < n3; ++k)
    for (Index l = 0; l < n3; ++l) {
      const Index m = ((k - l) % n3 + n3) % n3;
      for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n4; ++j) {
          double acc = 0.0;
          for (Index q = 0; q < n2; ++q) acc += x(i, q, m) * y(q, j, l);
          out(i, j, k) += acc;
        }
    }
  return out;
}

inline Tensor3 naive_transpose(const Tensor3 &x) {
  const Index n3 = x.n3();
  Tensor3 out(x.n2(), x.n1(), n3);
  for (Index k = 0; k < n3; ++k)
    for (Index i = 0; i < x.n1(); ++i)
      for (Index j = 0; j < x.n2(); ++j) out(j, i, k) = x(i, j, (n3 - k) % n3);
  return out;
}

/// ||a - b|| / max(1, ||b||).
inline double rel_err(const Tensor3 &a, const Tensor3 &b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Minimum of f over [lo, hi] on a uniform grid, refined by golden-section
/// search around the best grid point. Returns (argmin, min).
template <class F>
std::pair<double, double> grid_min(F &&f, double lo, double hi, double step) {
  double best_u = lo, best = f(lo);
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  for (long s = 1; s <= n; ++s) {
    const double u = std::min(hi, lo + static_cast<double>(s) * step);
    const double v = f(u);
    if (v < best) best = v, best_u = u;
  }
  double a = std::max(lo, best_u - step), b = std::min(hi, best_u + step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d)) b = d;
    else a = c;
  }
  const double u = 0.5 * (a + b);
  if (f(u) < best) best = f(u), best_u = u;
  return {best_u, best};
}

/// Mann-Whitney U / (pos * neg), ties counted as one half.
inline double mann_whitney_auc(const std::vector<double> &scores, const std::vector<int> &labels) {
  double u = 0.0;
  double pos = 0.0, neg = 0.0;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (!labels[a]) continue;
    pos += 1.0;
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (labels[b]) continue;
      if (scores[a] > scores[b]) u += 1.0;
      else if (scores[a] == scores[b]) u += 0.5;
    }
  }
  for (int l : labels) neg += l ? 0.0 : 1.0;
  return u / (pos * neg);
}

} // namespace ltd::testing
