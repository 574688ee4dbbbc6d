#include "iscc/exp/schemes.hpp"

#include <algorithm>

#include "iscc/perf/perf_model.hpp"
#include "iscc/stat/delta_stats.hpp"

namespace iscc {

Solution run_scheme(const Scenario& scenario, const Scheme& scheme, const AdmmOptions& options,
                    std::shared_ptr<const DetectionTauTable> taus) {
  scenario.validate();
  AdmmProblem p{scenario.sys, scenario.devices, scenario.model, scheme, std::move(taus)};
  return run_admm(p, options);
}

double constraint_violation(const Scenario& scenario, const Scheme& scheme, const Solution& solution) {
  const auto& sys = scenario.sys;
  const bool conventional = scheme.kind == Scheme::Kind::conventional;
  double worst = 0.0;
  auto over = [&](double value, double limit) {
    worst = std::max(worst, (value - limit) / std::max(std::abs(limit), 1e-300));
  };
  for (std::size_t k = 0; k < scenario.devices.size(); ++k) {
    const auto& dev = scenario.devices[k];
    const auto& d = solution.decisions[k];
    if (d.F == 0) continue;
    const double trig = conventional ? 1.0 : 1.0 - dev.q_static();
    const PowerBreakdown pw = power_overall(dev, sys, d.F, d.tau, trig);
    over(pw.overall, dev.P_max);
    const DelayBreakdown dl = delay_components(dev, sys, d.F, solution.allocations[k], trig);
    over(dl.compute, d.tau);
    over(dl.transmit + dl.recognition, sys.T_max);
    over(d.F, f_max_bound(dev, sys, trig));
    over(d.tau, sys.window_len_s);
    if (!conventional) over(crossing_point(scenario.model, d.F, d.tau).p, sys.p_min);
  }
  return worst;
}

}  // namespace iscc
