#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "iscc/signal/csi_trace.hpp"

namespace iscc {

// Unnormalized complex DFT of fixed length backed by FFTW.
// forward:  X[f] = sum_m x[m] e^{-j 2 pi f m / n}
// backward: x[m] = sum_f X[f] e^{+j 2 pi f m / n}
// One plan object is not safe for concurrent execute(); give each thread its own.
class FftPlan {
 public:
  enum class Direction { forward, backward };

  FftPlan(std::size_t n, Direction dir);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const { return n_; }
  void execute(std::span<const cplx> in, std::span<cplx> out);

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace iscc
