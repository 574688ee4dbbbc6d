#pragma once

#include <cstddef>
#include <vector>

#include "iscc/signal/csi_trace.hpp"
#include "iscc/signal/spectral.hpp"

namespace iscc {

struct DetectionEvent {
  std::size_t onset_sample = 0;
  // Forwarded window [forward_begin, forward_end), always one window long.
  // It may run past the end of the trace; consumers truncate.
  std::size_t forward_begin = 0;
  std::size_t forward_end = 0;
  double trigger_delta_power = 0.0;
};

// Slides over subcarrier 0 with the quantized step. A ΔP above eta at window
// end l emits onset l - step/2. After an event, testing resumes at the first
// grid point l with l - step at or beyond the end of the forwarded window.
std::vector<DetectionEvent> detect_onsets(const CsiTrace& trace, const WindowSpec& spec, double eta);

}  // namespace iscc
