#pragma once

#include "iscc/perf/system.hpp"

namespace iscc {

// R = (B/N) sum_n log2(1 + |H_n|² P_tx / (N σ²)).
double data_rate(const DeviceProfile& dev, const SystemConfig& sys);

struct PowerBreakdown {
  double sensing = 0.0;
  double compute = 0.0;
  double transmit = 0.0;
  double overall = 0.0;
};

// trigger_prob is the fraction of windows uploaded; the proposed scheme uses
// 1 - q_{k,1}.
PowerBreakdown power_overall(const DeviceProfile& dev, const SystemConfig& sys, double F, double tau,
                             double trigger_prob);
PowerBreakdown power_overall(const DeviceProfile& dev, const SystemConfig& sys, double F, double tau);

struct DelayBreakdown {
  double compute = 0.0;
  double transmit = 0.0;
  double recognition = 0.0;
};

DelayBreakdown delay_components(const DeviceProfile& dev, const SystemConfig& sys, double F,
                                double f_edge_alloc, double trigger_prob);
DelayBreakdown delay_components(const DeviceProfile& dev, const SystemConfig& sys, double F,
                                double f_edge_alloc);

// A_k = q_{k,1} + sum_{i>=2} q_{k,i} α(F, τ).
double device_accuracy(const DeviceProfile& dev, double F, double tau);

}  // namespace iscc
