#include "ltd/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltd/error.hpp"

namespace ltd {

const char *to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::DimensionMismatch: return "dimension mismatch";
  case ErrorCode::InvalidInput: return "invalid input";
  case ErrorCode::DegenerateInput: return "degenerate input";
  case ErrorCode::NumericFailure: return "numeric failure";
  case ErrorCode::Io: return "i/o error";
  case ErrorCode::BadMagic: return "bad magic";
  case ErrorCode::Truncated: return "truncated file";
  case ErrorCode::NonFinite: return "non-finite value";
  case ErrorCode::Config: return "configuration error";
  }
  return "unknown error";
}

namespace {

std::string shape(Dims d) {
  std::ostringstream os;
  os << d.n1 << "x" << d.n2 << "x" << d.n3;
  return os.str();
}

void require_same_shape(const Tensor3 &a, const Tensor3 &b, const char *op) {
  if (a.dims() != b.dims())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + shape(a.dims()) + " vs " + shape(b.dims()));
}

} // namespace

Tensor3::Tensor3(Index n1, Index n2, Index n3)
  : dims_{n1, n2, n3} {
  if (n1 < 0 || n2 < 0 || n3 < 0)
    throw Error(ErrorCode::InvalidInput, "negative tensor dimension");
  values_.assign(static_cast<std::size_t>(n1 * n2 * n3), 0.0);
}

Tensor3::Tensor3(Index n1, Index n2, Index n3, std::vector<double> values)
  : dims_{n1, n2, n3}, values_(std::move(values)) {
  if (n1 < 0 || n2 < 0 || n3 < 0 || static_cast<Index>(values_.size()) != n1 * n2 * n3)
    throw Error(ErrorCode::DimensionMismatch, "value count does not match " + shape(dims_));
}

void Tensor3::set_zero() noexcept { std::fill(values_.begin(), values_.end(), 0.0); }

bool Tensor3::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Tensor3::squared_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double Tensor3::norm() const noexcept { return std::sqrt(squared_norm()); }

Tensor3 &Tensor3::operator+=(const Tensor3 &rhs) {
  require_same_shape(*this, rhs, "operator+");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += rhs.values_[n];
  return *this;
}

Tensor3 &Tensor3::operator-=(const Tensor3 &rhs) {
  require_same_shape(*this, rhs, "operator-");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= rhs.values_[n];
  return *this;
}

Tensor3 &Tensor3::operator*=(double s) noexcept {
  for (double &v : values_) v *= s;
  return *this;
}

FTensor3::FTensor3(Index n1, Index n2, Index n3)
  : dims_{n1, n2, n3}, values_(static_cast<std::size_t>(n1 * n2 * n3)) {}

double inner(const Tensor3 &x, const Tensor3 &y) {
  require_same_shape(x, y, "inner");
  double s = 0.0;
  auto a = x.values();
  auto b = y.values();
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

Map2D tube_norms(const Tensor3 &x) {
  Map2D out = Map2D::Zero(x.n1(), x.n2());
  for (Index k = 0; k < x.n3(); ++k) out += x.slice(k).array().square().matrix();
  return out.array().sqrt().matrix();
}

std::vector<double> lateral_norms(const Tensor3 &x) {
  std::vector<double> sq(static_cast<std::size_t>(x.n2()), 0.0);
  for (Index k = 0; k < x.n3(); ++k)
    for (Index i = 0; i < x.n1(); ++i)
      for (Index j = 0; j < x.n2(); ++j) {
        const double v = x(i, j, k);
        sq[static_cast<std::size_t>(j)] += v * v;
      }
  for (double &v : sq) v = std::sqrt(v);
  return sq;
}

Tensor3 select_lateral(const Tensor3 &x, std::span<const Index> columns) {
  const Index r = static_cast<Index>(columns.size());
  Tensor3 out(x.n1(), r, x.n3());
  for (Index c = 0; c < r; ++c) {
    const Index j = columns[static_cast<std::size_t>(c)];
    if (j < 0 || j >= x.n2())
      throw Error(ErrorCode::DimensionMismatch, "lateral slice index out of range");
    for (Index k = 0; k < x.n3(); ++k)
      for (Index i = 0; i < x.n1(); ++i) out(i, c, k) = x(i, j, k);
  }
  return out;
}

Tensor3 remove_lateral(const Tensor3 &x, std::span<const Index> columns) {
  std::vector<bool> drop(static_cast<std::size_t>(x.n2()), false);
  for (Index j : columns) {
    if (j < 0 || j >= x.n2())
      throw Error(ErrorCode::DimensionMismatch, "lateral slice index out of range");
    drop[static_cast<std::size_t>(j)] = true;
  }
  std::vector<Index> keep;
  for (Index j = 0; j < x.n2(); ++j)
    if (!drop[static_cast<std::size_t>(j)]) keep.push_back(j);
  return select_lateral(x, keep);
}

Tensor3 concat_lateral(const Tensor3 &a, const Tensor3 &b) {
  if (a.n1() != b.n1() || a.n3() != b.n3())
    throw Error(ErrorCode::DimensionMismatch,
                "concat_lateral: " + shape(a.dims()) + " vs " + shape(b.dims()));
  Tensor3 out(a.n1(), a.n2() + b.n2(), a.n3());
  for (Index k = 0; k < a.n3(); ++k)
    for (Index i = 0; i < a.n1(); ++i) {
      for (Index j = 0; j < a.n2(); ++j) out(i, j, k) = a(i, j, k);
      for (Index j = 0; j < b.n2(); ++j) out(i, a.n2() + j, k) = b(i, j, k);
    }
  return out;
}

Tensor3 identity_tensor(Index n, Index n3) {
  if (n < 1 || n3 < 1) throw Error(ErrorCode::InvalidInput, "identity_tensor: n, n3 >= 1");
  Tensor3 out(n, n, n3);
  for (Index i = 0; i < n; ++i) out(i, i, 0) = 1.0;
  return out;
}

Matrix mode3_unfold(const Tensor3 &x) {
  // Band-sequential storage is already the row-major unfolding.
  return Eigen::Map<const RowMatrix>(x.data(), x.n3(), x.n1() * x.n2());
}

Tensor3 mode3_fold(const Matrix &m, Dims dims) {
  if (m.rows() != dims.n3 || m.cols() != dims.n1 * dims.n2)
    throw Error(ErrorCode::DimensionMismatch, "mode3_fold: matrix does not match " + shape(dims));
  Tensor3 out(dims);
  Eigen::Map<RowMatrix>(out.data(), dims.n3, dims.n1 * dims.n2) = m;
  return out;
}

Tensor3 mode3_product(const Tensor3 &x, const Matrix &m) {
  if (m.cols() != x.n3())
    throw Error(ErrorCode::DimensionMismatch, "mode3_product: matrix columns must equal n3");
  Tensor3 out(x.n1(), x.n2(), m.rows());
  Eigen::Map<RowMatrix>(out.data(), m.rows(), x.n1() * x.n2()).noalias() =
    m * Eigen::Map<const RowMatrix>(x.data(), x.n3(), x.n1() * x.n2());
  return out;
}

std::vector<Index> group_support(const Tensor3 &z, double tol) {
  std::vector<Index> support;
  const auto norms = lateral_norms(z);
  for (std::size_t j = 0; j < norms.size(); ++j)
    if (norms[j] > tol) support.push_back(static_cast<Index>(j));
  return support;
}

} // namespace ltd
