#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace iscc {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Ground-truth phase label over samples [start, end). class_id 1 is static.
struct LabelSegment {
  std::size_t start = 0;
  std::size_t end = 0;
  int class_id = 1;
};

struct CsiTrace {
  double sample_rate = 0.0;
  std::vector<cvec> subcarriers;  // [subcarrier][sample]
  std::vector<LabelSegment> labels;

  std::size_t length() const { return subcarriers.empty() ? 0 : subcarriers.front().size(); }

  // Throws InvalidArgument on rate <= 0, ragged subcarriers, non-finite
  // samples, or unordered/overlapping labels.
  void validate() const;

  // Label covering sample s, or nullptr.
  const LabelSegment* label_at(std::size_t s) const;
};

}  // namespace iscc
