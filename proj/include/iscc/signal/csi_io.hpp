#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iscc/signal/csi_trace.hpp"
#include "iscc/signal/detector.hpp"

namespace iscc {

// CSV `sample_index,subcarrier,re,im`. The sample rate is not part of the
// file and must be supplied.
CsiTrace read_csi_csv(std::istream& in, double sample_rate);
CsiTrace read_csi_csv(const std::string& path, double sample_rate);
void write_csi_csv(std::ostream& out, const CsiTrace& trace);

// Sidecar labels `start_sample,end_sample,class_id` with end exclusive.
std::vector<LabelSegment> read_labels_csv(std::istream& in);
std::vector<LabelSegment> read_labels_csv(const std::string& path);
void write_labels_csv(std::ostream& out, const std::vector<LabelSegment>& labels);

// `onset_sample,trigger_delta_power`.
void write_detections_csv(std::ostream& out, const std::vector<DetectionEvent>& events);

}  // namespace iscc
