#include "iscc/signal/detector.hpp"

#include <span>

#include "iscc/errors.hpp"

namespace iscc {

std::vector<DetectionEvent> detect_onsets(const CsiTrace& trace, const WindowSpec& spec, double eta) {
  if (trace.subcarriers.empty()) throw InvalidArgument("trace has no subcarriers");
  WindowPowerMeter meter(spec, trace.sample_rate);
  const std::size_t n = meter.window();
  const std::size_t step = meter.step();
  const auto& x = trace.subcarriers.front();
  if (x.size() <= n) throw InvalidArgument("trace must be longer than one window");

  std::span<const cplx> xs(x);
  auto power_at = [&](std::size_t end) { return meter(xs.subspan(end + 1 - n, n)); };

  std::vector<DetectionEvent> events;
  std::size_t prev_end = n - 1;
  double prev_power = power_at(prev_end);
  for (std::size_t end = prev_end + step; end < x.size(); end += step) {
    const double p = power_at(end);
    const double dp = power_difference(p, prev_power);
    if (dp > eta) {
      DetectionEvent ev;
      ev.onset_sample = end - step / 2;
      ev.forward_begin = ev.onset_sample;
      ev.forward_end = ev.onset_sample + n;
      ev.trigger_delta_power = dp;
      events.push_back(ev);
      // Re-arm: the reference window must start no earlier than the onset.
      std::size_t resume = end;
      while (resume - step < ev.forward_end - 1) resume += step;
      if (resume >= x.size()) break;
      prev_end = resume - step;
      prev_power = power_at(prev_end);
      end = prev_end;  // loop increment moves to resume
      continue;
    }
    prev_end = end;
    prev_power = p;
  }
  return events;
}

}  // namespace iscc
