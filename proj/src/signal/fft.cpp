#include "iscc/signal/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "iscc/errors.hpp"

namespace iscc {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlan::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

FftPlan::FftPlan(std::size_t n, Direction dir) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw InvalidArgument("FFT length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->in = fftw_alloc_complex(n);
  impl_->out = fftw_alloc_complex(n);
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->in, impl_->out,
                                 dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
  if (!impl_->plan) throw Error("FFTW planning failed");
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::execute(std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != n_ || out.size() != n_) throw InvalidArgument("FFT buffer size mismatch");
  // std::complex<double> is layout-compatible with double[2].
  std::memcpy(impl_->in, in.data(), n_ * sizeof(cplx));
  fftw_execute(impl_->plan);
  std::memcpy(static_cast<void*>(out.data()), impl_->out, n_ * sizeof(cplx));
}

}  // namespace iscc
