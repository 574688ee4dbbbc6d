#include "iscc/signal/csi_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "iscc/errors.hpp"

namespace iscc {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header)
    throw InvalidArgument("expected CSV header '" + header + "'");
}

}  // namespace

CsiTrace read_csi_csv(std::istream& in, double sample_rate) {
  expect_header(in, "sample_index,subcarrier,re,im");
  CsiTrace trace;
  trace.sample_rate = sample_rate;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw InvalidArgument("line " + std::to_string(lineno) + ": expected 4 fields");
    try {
      const std::size_t idx = std::stoull(cells[0]);
      const std::size_t sc = std::stoull(cells[1]);
      const cplx v(std::stod(cells[2]), std::stod(cells[3]));
      if (sc >= trace.subcarriers.size()) trace.subcarriers.resize(sc + 1);
      auto& col = trace.subcarriers[sc];
      if (idx >= col.size()) col.resize(idx + 1, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
      col[idx] = v;
    } catch (const std::logic_error&) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  trace.validate();
  return trace;
}

CsiTrace read_csi_csv(const std::string& path, double sample_rate) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_csi_csv(in, sample_rate);
}

void write_csi_csv(std::ostream& out, const CsiTrace& trace) {
  out << "sample_index,subcarrier,re,im\n" << std::setprecision(17);
  for (std::size_t m = 0; m < trace.length(); ++m)
    for (std::size_t sc = 0; sc < trace.subcarriers.size(); ++sc)
      out << m << ',' << sc << ',' << trace.subcarriers[sc][m].real() << ','
          << trace.subcarriers[sc][m].imag() << '\n';
}

std::vector<LabelSegment> read_labels_csv(std::istream& in) {
  expect_header(in, "start_sample,end_sample,class_id");
  std::vector<LabelSegment> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw InvalidArgument("line " + std::to_string(lineno) + ": expected 3 fields");
    try {
      out.push_back({std::stoull(cells[0]), std::stoull(cells[1]), std::stoi(cells[2])});
    } catch (const std::logic_error&) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

std::vector<LabelSegment> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_labels_csv(in);
}

void write_labels_csv(std::ostream& out, const std::vector<LabelSegment>& labels) {
  out << "start_sample,end_sample,class_id\n";
  for (const auto& s : labels) out << s.start << ',' << s.end << ',' << s.class_id << '\n';
}

void write_detections_csv(std::ostream& out, const std::vector<DetectionEvent>& events) {
  out << "onset_sample,trigger_delta_power\n" << std::setprecision(17);
  for (const auto& e : events) out << e.onset_sample << ',' << e.trigger_delta_power << '\n';
}

}  // namespace iscc
