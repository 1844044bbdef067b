#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ltd {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CxRowMatrix =
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A single-band image, indexed (row, column).
using Map2D = RowMatrix;

struct Dims {
  Index n1 = 0;
  Index n2 = 0;
  Index n3 = 0;

  Index size() const noexcept { return n1 * n2 * n3; }
  friend bool operator==(const Dims &, const Dims &) = default;
};

/// Dense real third-order tensor stored band-sequentially: entry (i, j, k)
/// lives at offset (k * n1 + i) * n2 + j, so each frontal slice is a
/// contiguous row-major n1 x n2 block and each mode-3 tube has stride n1 * n2.
class Tensor3 {
public:
  Tensor3() = default;
  Tensor3(Index n1, Index n2, Index n3);
  Tensor3(Index n1, Index n2, Index n3, std::vector<double> values);
  explicit Tensor3(Dims dims) : Tensor3(dims.n1, dims.n2, dims.n3) {}

  Index n1() const noexcept { return dims_.n1; }
  Index n2() const noexcept { return dims_.n2; }
  Index n3() const noexcept { return dims_.n3; }
  Dims dims() const noexcept { return dims_; }
  Index size() const noexcept { return dims_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  Index offset(Index i, Index j, Index k) const noexcept {
    return (k * dims_.n1 + i) * dims_.n2 + j;
  }
  double &operator()(Index i, Index j, Index k) noexcept { return values_[offset(i, j, k)]; }
  double operator()(Index i, Index j, Index k) const noexcept {
    return values_[offset(i, j, k)];
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double *data() noexcept { return values_.data(); }
  const double *data() const noexcept { return values_.data(); }

  Eigen::Map<RowMatrix> slice(Index k) {
    return {values_.data() + k * dims_.n1 * dims_.n2, dims_.n1, dims_.n2};
  }
  Eigen::Map<const RowMatrix> slice(Index k) const {
    return {values_.data() + k * dims_.n1 * dims_.n2, dims_.n1, dims_.n2};
  }

  void set_zero() noexcept;
  bool all_finite() const noexcept;

  /// Frobenius norm, accumulated in storage order.
  double norm() const noexcept;
  double squared_norm() const noexcept;

  Tensor3 &operator+=(const Tensor3 &rhs);
  Tensor3 &operator-=(const Tensor3 &rhs);
  Tensor3 &operator*=(double s) noexcept;

  friend Tensor3 operator+(Tensor3 lhs, const Tensor3 &rhs) { return lhs += rhs; }
  friend Tensor3 operator-(Tensor3 lhs, const Tensor3 &rhs) { return lhs -= rhs; }
  friend Tensor3 operator*(Tensor3 lhs, double s) { return lhs *= s; }
  friend Tensor3 operator*(double s, Tensor3 rhs) { return rhs *= s; }

  friend bool operator==(const Tensor3 &, const Tensor3 &) = default;

private:
  Dims dims_;
  std::vector<double> values_;
};

/// Complex tensor holding the mode-3 DFT of a Tensor3 (all n3 frontal slices).
class FTensor3 {
public:
  FTensor3() = default;
  FTensor3(Index n1, Index n2, Index n3);

  Index n1() const noexcept { return dims_.n1; }
  Index n2() const noexcept { return dims_.n2; }
  Index n3() const noexcept { return dims_.n3; }
  Dims dims() const noexcept { return dims_; }

  std::complex<double> &operator()(Index i, Index j, Index k) noexcept {
    return values_[(k * dims_.n1 + i) * dims_.n2 + j];
  }
  std::complex<double> operator()(Index i, Index j, Index k) const noexcept {
    return values_[(k * dims_.n1 + i) * dims_.n2 + j];
  }
  Eigen::Map<CxRowMatrix> slice(Index k) {
    return {values_.data() + k * dims_.n1 * dims_.n2, dims_.n1, dims_.n2};
  }
  Eigen::Map<const CxRowMatrix> slice(Index k) const {
    return {values_.data() + k * dims_.n1 * dims_.n2, dims_.n1, dims_.n2};
  }
  std::complex<double> *data() noexcept { return values_.data(); }
  const std::complex<double> *data() const noexcept { return values_.data(); }

private:
  Dims dims_;
  std::vector<std::complex<double>> values_;
};

double inner(const Tensor3 &x, const Tensor3 &y);

/// Euclidean norm of every mode-3 tube, returned as an n1 x n2 image.
Map2D tube_norms(const Tensor3 &x);

/// Frobenius norm of every lateral slice x(:, j, :).
std::vector<double> lateral_norms(const Tensor3 &x);

/// Lateral slices x(:, j, :) for the listed j, in the listed order.
Tensor3 select_lateral(const Tensor3 &x, std::span<const Index> columns);

/// Drop the listed lateral slices, keeping the rest in order.
Tensor3 remove_lateral(const Tensor3 &x, std::span<const Index> columns);

/// [a, b] along the second mode.
Tensor3 concat_lateral(const Tensor3 &a, const Tensor3 &b);

/// Identity tensor: first frontal slice is I_n, the rest are zero.
Tensor3 identity_tensor(Index n, Index n3);

/// Mode-3 unfolding X_(3) (n3 x n1*n2): X_(3)(k, i*n2 + j) = x(i, j, k).
Matrix mode3_unfold(const Tensor3 &x);
Tensor3 mode3_fold(const Matrix &m, Dims dims);

/// (x x_3 m)(i, j, k) = sum_l x(i, j, l) * m(k, l).
Tensor3 mode3_product(const Tensor3 &x, const Matrix &m);

/// Indices j with ||z(:, j, :)|| > tol.
std::vector<Index> group_support(const Tensor3 &z, double tol = 0.0);

} // namespace ltd
