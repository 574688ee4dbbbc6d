#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iscc/signal/csi_trace.hpp"
#include "iscc/stat/sensing_model.hpp"

namespace iscc {

struct ScheduleItem {
  int class_id = 1;
  double duration_s = 0.0;
};

// Synthetic CSI whose window high-frequency power reproduces the model's
// mean and variance for windows lying inside one labelled segment.
//
// Per class the sample is dc + a bin-centred in-band tone of power λ (random
// phase per segment) + complex Gaussian noise with a flat spectrum over a
// contiguous in-band block. Block width and level are solved at construction
// from the exact covariance of the windowed DFT so that both moment equations
// hold. σ_d² is not synthesised.
class CsiGenerator {
 public:
  struct ClassShape {
    double tone_amplitude = 0.0;
    std::size_t tone_bin = 0;
    double level = 0.0;    // noise spectral level, power per window bin
    double lo_bin = 0.0;   // noise block [lo_bin, hi_bin] in window bins
    double hi_bin = 0.0;
    double target_mean = 0.0;
    double target_var = 0.0;
    double predicted_mean = 0.0;  // exact moments of the synthesised process
    double predicted_var = 0.0;
  };

  CsiGenerator(const SensingModelParams& model, double sample_rate, double dc_level = 1.0);

  CsiTrace generate(const std::vector<ScheduleItem>& schedule, std::uint64_t seed) const;

  const ClassShape& shape(int class_id) const;
  std::size_t window() const { return n_; }
  double sample_rate() const { return rate_; }

 private:
  SensingModelParams model_;
  double rate_;
  double dc_;
  std::size_t n_;
  std::size_t band_lo_;
  std::size_t band_hi_;
  std::vector<ClassShape> shapes_;
};

CsiTrace generate_csi_trace(const SensingModelParams& model, const std::vector<ScheduleItem>& schedule,
                            double sample_rate, std::uint64_t seed);

}  // namespace iscc
