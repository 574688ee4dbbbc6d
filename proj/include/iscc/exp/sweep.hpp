#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iscc/admm/admm.hpp"
#include "iscc/exp/scenario.hpp"

namespace iscc {

enum class SweepAxis { edge_compute, static_prob, permitted_delay, device_count };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::edge_compute;
  std::vector<double> values;  // strictly increasing
  std::vector<Scheme> schemes;
  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  std::string scheme;
  double accuracy = 0.0;
  int iterations = 0;
  bool converged = false;
};

// One row per (value, scheme) in value-major order. Points run on up to
// `threads` workers; the output order and content do not depend on it.
std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec, const AdmmOptions& options = {},
                                unsigned threads = 1);

// Scenario for one sweep point.
Scenario sweep_point(const Scenario& base, SweepAxis axis, double value);

// `axis,scheme,accuracy,iterations,converged`
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace iscc
