#include "iscc/signal/csi_trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iscc/errors.hpp"

namespace iscc {

void CsiTrace::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw InvalidArgument("sample_rate must be positive");
  if (subcarriers.empty()) throw InvalidArgument("trace has no subcarriers");
  const std::size_t n = subcarriers.front().size();
  for (const auto& sc : subcarriers) {
    if (sc.size() != n) throw InvalidArgument("subcarriers differ in length");
    for (const auto& v : sc)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InvalidArgument("trace contains non-finite samples");
  }
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& seg = labels[i];
    if (seg.end <= seg.start) throw InvalidArgument("empty label segment " + std::to_string(i));
    if (i > 0 && seg.start < prev_end)
      throw InvalidArgument("label segments overlap or are unordered at " + std::to_string(i));
    if (seg.class_id < 1) throw InvalidArgument("label class ids start at 1");
    prev_end = seg.end;
  }
}

const LabelSegment* CsiTrace::label_at(std::size_t s) const {
  auto it = std::upper_bound(labels.begin(), labels.end(), s,
                             [](std::size_t v, const LabelSegment& seg) { return v < seg.start; });
  if (it == labels.begin()) return nullptr;
  --it;
  return s < it->end ? &*it : nullptr;
}

}  // namespace iscc
