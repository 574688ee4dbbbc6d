#include "iscc/perf/perf_model.hpp"

#include <cmath>

#include "iscc/errors.hpp"

namespace iscc {

namespace {
void check_duty(const SystemConfig& sys, double F) {
  if (!(F >= 1.0)) throw InvalidArgument("sampling rate must be >= 1");
  if (sys.t_s * F >= 1.0) throw InfeasibleError("sensing duty t_s F must stay below 1");
}
}  // namespace

double data_rate(const DeviceProfile& dev, const SystemConfig& sys) {
  if (dev.gains.empty()) throw InvalidArgument("device has no subcarriers");
  const double denom = static_cast<double>(sys.N) * sys.noise_sigma_sq();
  double bits = 0.0;
  for (double g : dev.gains) bits += std::log2(1.0 + g * dev.P_tx / denom);
  return sys.B / static_cast<double>(sys.N) * bits;
}

PowerBreakdown power_overall(const DeviceProfile& dev, const SystemConfig& sys, double F, double tau,
                             double trigger_prob) {
  check_duty(sys, F);
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  PowerBreakdown p;
  p.sensing = dev.E_s * F;
  p.compute = dev.E_c * sys.window_len_s * F / tau;
  p.transmit = (1.0 - sys.t_s * F) * dev.P_tx * trigger_prob;
  p.overall = p.sensing + p.compute + p.transmit;
  return p;
}

PowerBreakdown power_overall(const DeviceProfile& dev, const SystemConfig& sys, double F, double tau) {
  return power_overall(dev, sys, F, tau, 1.0 - dev.q_static());
}

DelayBreakdown delay_components(const DeviceProfile& dev, const SystemConfig& sys, double F,
                                double f_edge_alloc, double trigger_prob) {
  check_duty(sys, F);
  if (!(f_edge_alloc > 0.0)) throw InvalidArgument("edge allocation must be positive");
  const double rate = (1.0 - sys.t_s * F) * data_rate(dev, sys);
  if (!(rate > 0.0)) throw InfeasibleError("effective uplink rate is not positive");
  const double elements = static_cast<double>(sys.N) * sys.window_len_s * F;
  DelayBreakdown d;
  d.compute = sys.window_len_s * F * sys.C_L / dev.f_local;
  d.transmit = elements * sys.V_L * trigger_prob / rate;
  d.recognition = elements * sys.C_e * trigger_prob / f_edge_alloc;
  return d;
}

DelayBreakdown delay_components(const DeviceProfile& dev, const SystemConfig& sys, double F,
                                double f_edge_alloc) {
  return delay_components(dev, sys, F, f_edge_alloc, 1.0 - dev.q_static());
}

double device_accuracy(const DeviceProfile& dev, double F, double tau) {
  if (!dev.surface) throw InvalidArgument("device has no accuracy surface");
  const double a = (*dev.surface)(F, tau);
  double acc = dev.q_static();
  for (std::size_t i = 1; i < dev.priors.size(); ++i) acc += dev.priors[i] * a;
  return acc;
}

}  // namespace iscc
