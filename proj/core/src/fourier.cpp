#include "fourier.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

#include "ltd/error.hpp"
#include "ltd/parallel.hpp"

namespace ltd::detail {

namespace {

enum class PlanKind { R2C, C2R, C2CBackward, C2CForward };

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (kind, n3, howmany) and kept.
class PlanCache {
public:
  fftw_plan get(PlanKind kind, int n3, int howmany) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(kind, n3, howmany);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t real_len = static_cast<std::size_t>(n3) * static_cast<std::size_t>(howmany);
    const std::size_t cx_len = real_len;
    double *r = fftw_alloc_real(real_len);
    fftw_complex *c = fftw_alloc_complex(cx_len);
    fftw_complex *c2 = fftw_alloc_complex(cx_len);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    int n[] = {n3};
    fftw_plan plan = nullptr;
    switch (kind) {
    case PlanKind::R2C:
      plan = fftw_plan_many_dft_r2c(1, n, howmany, r, nullptr, howmany, 1, c, nullptr, howmany, 1,
                                    flags);
      break;
    case PlanKind::C2R:
      plan = fftw_plan_many_dft_c2r(1, n, howmany, c, nullptr, howmany, 1, r, nullptr, howmany, 1,
                                    flags);
      break;
    case PlanKind::C2CBackward:
    case PlanKind::C2CForward:
      plan = fftw_plan_many_dft(1, n, howmany, c, nullptr, howmany, 1, c2, nullptr, howmany, 1,
                                kind == PlanKind::C2CForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                flags);
      break;
    }
    fftw_free(r);
    fftw_free(c);
    fftw_free(c2);
    if (!plan) throw Error(ErrorCode::NumericFailure, "FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto &[key, plan] : plans_) fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<PlanKind, int, int>, fftw_plan> plans_;
};

PlanCache &plans() {
  static PlanCache cache;
  return cache;
}

fftw_complex *as_fftw(std::complex<double> *p) { return reinterpret_cast<fftw_complex *>(p); }

} // namespace

HalfSpectrum forward(const Tensor3 &x) {
  const Index n3 = x.n3();
  const Index plane = x.n1() * x.n2();
  const Index half = half_length(n3);
  HalfSpectrum out;
  out.n3 = n3;
  out.slices.resize(static_cast<std::size_t>(half));
  if (plane == 0) {
    for (auto &s : out.slices) s.resize(x.n1(), x.n2());
    return out;
  }
  std::vector<std::complex<double>> buffer(static_cast<std::size_t>(half * plane));
  fftw_plan plan = plans().get(PlanKind::R2C, static_cast<int>(n3), static_cast<int>(plane));
  fftw_execute_dft_r2c(plan, const_cast<double *>(x.data()), as_fftw(buffer.data()));
  for (Index k = 0; k < half; ++k)
    out.slices[static_cast<std::size_t>(k)] =
      Eigen::Map<const CxRowMatrix>(buffer.data() + k * plane, x.n1(), x.n2());
  return out;
}

Tensor3 inverse(const HalfSpectrum &s) {
  const Index n1 = s.rows();
  const Index n2 = s.cols();
  const Index n3 = s.n3;
  const Index plane = n1 * n2;
  Tensor3 out(n1, n2, n3);
  if (plane == 0) return out;
  const Index half = half_length(n3);
  std::vector<std::complex<double>> buffer(static_cast<std::size_t>(half * plane));
  for (Index k = 0; k < half; ++k)
    Eigen::Map<CxRowMatrix>(buffer.data() + k * plane, n1, n2) =
      s.slices[static_cast<std::size_t>(k)];
  fftw_plan plan = plans().get(PlanKind::C2R, static_cast<int>(n3), static_cast<int>(plane));
  fftw_execute_dft_c2r(plan, as_fftw(buffer.data()), out.data());
  out *= 1.0 / static_cast<double>(n3);
  return out;
}

void forward_full(const Tensor3 &x, FTensor3 &out) {
  const Index plane = x.n1() * x.n2();
  out = FTensor3(x.n1(), x.n2(), x.n3());
  if (plane == 0 || x.n3() == 0) return;
  std::vector<std::complex<double>> in(x.values().begin(), x.values().end());
  fftw_plan plan =
    plans().get(PlanKind::C2CForward, static_cast<int>(x.n3()), static_cast<int>(plane));
  fftw_execute_dft(plan, as_fftw(in.data()), as_fftw(out.data()));
}

void inverse_full(const FTensor3 &xf, Tensor3 &out) {
  const Index plane = xf.n1() * xf.n2();
  out = Tensor3(xf.n1(), xf.n2(), xf.n3());
  if (plane == 0 || xf.n3() == 0) return;
  const std::size_t len = static_cast<std::size_t>(plane * xf.n3());
  std::vector<std::complex<double>> in(xf.data(), xf.data() + len);
  std::vector<std::complex<double>> res(len);
  fftw_plan plan =
    plans().get(PlanKind::C2CBackward, static_cast<int>(xf.n3()), static_cast<int>(plane));
  fftw_execute_dft(plan, as_fftw(in.data()), as_fftw(res.data()));
  const double scale = 1.0 / static_cast<double>(xf.n3());
  auto values = out.values();
  for (std::size_t n = 0; n < len; ++n) values[n] = res[n].real() * scale;
}

SliceSvd slice_svd(const Eigen::MatrixXcd &m, bool real_slice, bool full) {
  const unsigned opts =
    full ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  SliceSvd out;
  if (real_slice) {
    const Eigen::MatrixXd re = m.real();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(re, opts);
    if (svd.info() != Eigen::Success)
      throw Error(ErrorCode::NumericFailure, "SVD did not converge");
    out.U = svd.matrixU().cast<std::complex<double>>();
    out.s = svd.singularValues();
    out.V = svd.matrixV().cast<std::complex<double>>();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, opts);
    if (svd.info() != Eigen::Success)
      throw Error(ErrorCode::NumericFailure, "SVD did not converge");
    out.U = svd.matrixU();
    out.s = svd.singularValues();
    out.V = svd.matrixV();
  }
  if (!out.s.allFinite()) throw Error(ErrorCode::NumericFailure, "SVD produced non-finite values");
  return out;
}

} // namespace ltd::detail
