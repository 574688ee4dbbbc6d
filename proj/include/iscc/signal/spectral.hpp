#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iscc/signal/csi_trace.hpp"
#include "iscc/signal/fft.hpp"

namespace iscc {

struct WindowSpec {
  double window_len_s = 1.5;
  double step_s = 0.3;
  double band_lo_hz = 10.0;
  double band_hi_hz = 60.0;

  // Checks 0 < step <= window and 0 <= lo < hi <= F/2.
  void validate(double sample_rate) const;
};

// Integer sample counts for a window spec at a given rate.
struct SampleGrid {
  std::size_t window = 0;
  std::size_t step = 0;
};

// Rounds T^s F and tau F to whole samples; both must be >= 2.
SampleGrid quantize(const WindowSpec& spec, double sample_rate);

struct BandBins {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

// Bins floor(F_lo T)..ceil(F_hi T) with T = n / F the effective window length.
BandBins band_bins(const WindowSpec& spec, double sample_rate, std::size_t n);

// W[f] = n^{-1/2} sum_m h[m] e^{-j 2 pi f m / n}.
cvec dft_window(std::span<const cplx> h);

// Band energy over [lo, hi] divided by the spectrum length.
double band_power(std::span<const cplx> spectrum, BandBins bins);

double high_freq_power(std::span<const cplx> spectrum, const WindowSpec& spec, double sample_rate);

inline double power_difference(double p_curr, double p_prev) { return p_curr - p_prev; }

// Repeated high-frequency power evaluation over same-length windows with a
// reusable transform plan.
class WindowPowerMeter {
 public:
  WindowPowerMeter(const WindowSpec& spec, double sample_rate);

  std::size_t window() const { return grid_.window; }
  std::size_t step() const { return grid_.step; }
  BandBins bins() const { return bins_; }

  double operator()(std::span<const cplx> window);

 private:
  SampleGrid grid_;
  BandBins bins_;
  FftPlan plan_;
  cvec spectrum_;
};

// Window powers on the detector grid: entry j is the window ending at sample
// window-1 + j*step.
std::vector<double> window_power_series(std::span<const cplx> x, const WindowSpec& spec,
                                        double sample_rate);

}  // namespace iscc
