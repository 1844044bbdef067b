#include "ltd/talgebra.hpp"

#include <algorithm>
#include <cmath>

#include "fourier.hpp"
#include "ltd/error.hpp"
#include "ltd/parallel.hpp"

namespace ltd {

using detail::HalfSpectrum;

namespace {

enum class Side { Plain, Adjoint };

Tensor3 fourier_product(const Tensor3 &x, Side xs, const Tensor3 &y, Side ys) {
  const Index xr = xs == Side::Plain ? x.n1() : x.n2();
  const Index xc = xs == Side::Plain ? x.n2() : x.n1();
  const Index yr = ys == Side::Plain ? y.n1() : y.n2();
  const Index yc = ys == Side::Plain ? y.n2() : y.n1();
  if (xc != yr || x.n3() != y.n3())
    throw Error(ErrorCode::DimensionMismatch, "t-product: inner dimensions or n3 differ");

  const HalfSpectrum xf = detail::forward(x);
  const HalfSpectrum yf = detail::forward(y);
  HalfSpectrum out;
  out.n3 = x.n3();
  out.slices.resize(xf.slices.size());
  parallel_for(static_cast<Index>(xf.slices.size()), [&](Index k) {
    const auto &a = xf.slices[static_cast<std::size_t>(k)];
    const auto &b = yf.slices[static_cast<std::size_t>(k)];
    auto &c = out.slices[static_cast<std::size_t>(k)];
    if (xs == Side::Plain && ys == Side::Plain)
      c.noalias() = a * b;
    else if (xs == Side::Plain)
      c.noalias() = a * b.adjoint();
    else if (ys == Side::Plain)
      c.noalias() = a.adjoint() * b;
    else
      c.noalias() = a.adjoint() * b.adjoint();
  });
  if (out.slices.empty() || xr == 0 || yc == 0) return Tensor3(xr, yc, x.n3());
  return detail::inverse(out);
}

} // namespace

FTensor3 dft3(const Tensor3 &x) {
  FTensor3 out;
  detail::forward_full(x, out);
  return out;
}

Tensor3 idft3(const FTensor3 &xf) {
  Tensor3 out;
  detail::inverse_full(xf, out);
  return out;
}

Tensor3 tprod(const Tensor3 &x, const Tensor3 &y) {
  return fourier_product(x, Side::Plain, y, Side::Plain);
}

Tensor3 tprod_nt(const Tensor3 &x, const Tensor3 &y) {
  return fourier_product(x, Side::Plain, y, Side::Adjoint);
}

Tensor3 tprod_tn(const Tensor3 &x, const Tensor3 &y) {
  return fourier_product(x, Side::Adjoint, y, Side::Plain);
}

Tensor3 bcirc_oracle_tprod(const Tensor3 &x, const Tensor3 &y) {
  if (x.n2() != y.n1() || x.n3() != y.n3())
    throw Error(ErrorCode::DimensionMismatch, "bcirc_oracle_tprod: inner dimensions or n3 differ");
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3(), n4 = y.n2();

  // bcirc(x) is (n1 n3) x (n2 n3); block (p, q) is frontal slice (p - q) mod n3.
  Matrix circ = Matrix::Zero(n1 * n3, n2 * n3);
  for (Index p = 0; p < n3; ++p)
    for (Index q = 0; q < n3; ++q)
      circ.block(p * n1, q * n2, n1, n2) = x.slice(((p - q) % n3 + n3) % n3);

  Matrix unfolded(n2 * n3, n4);
  for (Index k = 0; k < n3; ++k) unfolded.block(k * n2, 0, n2, n4) = y.slice(k);

  const Matrix product = circ * unfolded;
  Tensor3 out(n1, n4, n3);
  for (Index k = 0; k < n3; ++k) out.slice(k) = product.block(k * n1, 0, n1, n4);
  return out;
}

Tensor3 conj_transpose(const Tensor3 &x) {
  const Index n3 = x.n3();
  Tensor3 out(x.n2(), x.n1(), n3);
  for (Index k = 0; k < n3; ++k) out.slice(k) = x.slice(k == 0 ? 0 : n3 - k).transpose();
  return out;
}

TSvdFactors tsvd(const Tensor3 &x, bool economy) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  const Index q = std::min(n1, n2);
  const Index ucols = economy ? q : n1;
  const Index vcols = economy ? q : n2;
  const Index srows = economy ? q : n1;
  const Index scols = economy ? q : n2;

  const HalfSpectrum xf = detail::forward(x);
  const Index half = static_cast<Index>(xf.slices.size());
  HalfSpectrum uf, sf, vf;
  uf.n3 = sf.n3 = vf.n3 = n3;
  uf.slices.resize(xf.slices.size());
  sf.slices.resize(xf.slices.size());
  vf.slices.resize(xf.slices.size());

  parallel_for(half, [&](Index k) {
    const auto svd = detail::slice_svd(xf.slices[static_cast<std::size_t>(k)],
                                       detail::self_conjugate(k, n3), !economy);
    const auto kk = static_cast<std::size_t>(k);
    uf.slices[kk] = svd.U;
    vf.slices[kk] = svd.V;
    sf.slices[kk] = Eigen::MatrixXcd::Zero(srows, scols);
    for (Index i = 0; i < svd.s.size(); ++i) sf.slices[kk](i, i) = svd.s(i);
  });

  TSvdFactors out;
  out.economy = economy;
  out.U = ucols > 0 ? detail::inverse(uf) : Tensor3(n1, 0, n3);
  out.S = (srows > 0 && scols > 0) ? detail::inverse(sf) : Tensor3(srows, scols, n3);
  out.V = vcols > 0 ? detail::inverse(vf) : Tensor3(n2, 0, n3);
  // The inverse transform of a diagonal spectrum is diagonal up to rounding;
  // clear the off-diagonal entries so S is exactly f-diagonal.
  for (Index k = 0; k < n3; ++k)
    for (Index i = 0; i < out.S.n1(); ++i)
      for (Index j = 0; j < out.S.n2(); ++j)
        if (i != j) out.S(i, j, k) = 0.0;
  return out;
}

Index tubal_rank(const Tensor3 &x, std::optional<double> tol) {
  if (tol && *tol < 0.0) throw Error(ErrorCode::InvalidInput, "tubal_rank: tol must be >= 0");
  const Index n3 = x.n3();
  const Index q = std::min(x.n1(), x.n2());
  if (q == 0 || n3 == 0) return 0;
  const HalfSpectrum xf = detail::forward(x);

  // ||S(i,i,:)||^2 = (1/n3) sum over all n3 Fourier slices of sigma_i^2;
  // non-self-conjugate slices appear twice in the full spectrum.
  Eigen::VectorXd tube_sq = Eigen::VectorXd::Zero(q);
  for (Index k = 0; k < static_cast<Index>(xf.slices.size()); ++k) {
    const bool real_slice = detail::self_conjugate(k, n3);
    const Eigen::VectorXd s =
      real_slice ? Eigen::BDCSVD<Eigen::MatrixXd>(xf.slices[static_cast<std::size_t>(k)].real())
                     .singularValues()
                 : Eigen::BDCSVD<Eigen::MatrixXcd>(xf.slices[static_cast<std::size_t>(k)])
                     .singularValues();
    tube_sq += (real_slice ? 1.0 : 2.0) * s.array().square().matrix();
  }
  const Eigen::VectorXd tube = (tube_sq / static_cast<double>(n3)).array().sqrt();
  const double threshold = tol ? *tol : 1e-8 * tube.maxCoeff();
  Index rank = 0;
  for (Index i = 0; i < q; ++i)
    if (tube(i) > threshold) ++rank;
  return rank;
}

double spectral_norm(const Matrix &m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
  const Index n = gram.rows();
  if (gram.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Deterministic start with no special alignment to any coordinate axis.
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 2.0 * static_cast<double>(i));
  v.normalize();
  double lambda = v.dot(gram * v);
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd w = gram * v;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    const double next = v.dot(gram * v);
    const bool done = std::abs(next - lambda) <= 1e-10 * std::abs(next);
    lambda = next;
    if (done) break;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

} // namespace ltd
