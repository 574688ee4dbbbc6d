#pragma once

#include <cstddef>
#include <vector>

#include "iscc/signal/csi_trace.hpp"
#include "iscc/stat/sensing_model.hpp"

namespace iscc {

struct FitGridPoint {
  double F = 0.0;
  double tau = 0.0;
};

struct FitOptions {
  double window_len_s = 1.5;
  double band_lo_hz = 10.0;
  double band_hi_hz = 60.0;
  std::size_t min_samples = 30;  // per (F, tau, class) cell, for windows and for ΔP
  std::vector<double> priors;    // empty: fraction of labelled segments per class
};

// Empirical statistics of one (F, tau, class) cell.
struct FitCell {
  int class_id = 1;
  double F = 0.0;
  double tau = 0.0;
  std::size_t windows = 0;
  double power_mean = 0.0;
  double power_var = 0.0;
  std::size_t deltas = 0;
  double delta_mean = 0.0;
  double delta_var = 0.0;
};

struct ClassFitQuality {
  int class_id = 1;
  double nmse_power_mean = 0.0;
  double nmse_power_var = 0.0;
  double nmse_delta_mean = 0.0;  // NaN for the static class (zero-mean target)
  double nmse_delta_var = 0.0;
};

struct FitResult {
  SensingModelParams params;
  std::vector<FitCell> cells;
  std::vector<ClassFitQuality> quality;
};

// Window powers are taken on each grid point's detector grid from windows
// lying inside one labelled segment. Static ΔP pairs lie inside one static
// segment; onset ΔP pairs are those whose entering step contains the start of
// an action segment that directly follows a static one.
//
// (λ_i, r_i) are least squares over x = 1/(T F) of the window-power means;
// σc² is fitted through the origin to the window-power variances with
// relative weights; σd,i² is the mean nonnegative residual of the ΔP variance.
// Throws FitError listing every cell short of min_samples.
FitResult fit_model_params(const std::vector<CsiTrace>& traces, const std::vector<FitGridPoint>& grid,
                           const FitOptions& options);

// Normalised squared error sum (e - f)² / sum e²; 0 when both vanish.
double nmse(const std::vector<double>& empirical, const std::vector<double>& fitted);

}  // namespace iscc
