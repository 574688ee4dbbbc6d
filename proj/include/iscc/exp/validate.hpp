#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "iscc/exp/scenario.hpp"
#include "iscc/signal/csi_trace.hpp"
#include "iscc/stat/fit.hpp"

namespace iscc {

struct ValidationCheck {
  std::string name;
  bool pass = true;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  bool gating = true;  // informational checks never fail the report
};

struct ValidationReport {
  std::string target;
  std::vector<ValidationCheck> checks;

  bool pass() const;
  std::string text() const;
  nlohmann::json json() const;
};

struct ValidationBudget {
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 1;
  int fit_repetitions = 40;  // onsets per action class per sampling rate
  int random_requests = 1000;
  int random_windows = 10000;
};

// prop1: sampled vs closed-form miss / false-positive rates.
// thm1:  crossing error nonincreasing in τ on a 20 x 20 grid, and the
//        monotone rate curves in η.
// thm2:  bisection allocation vs the projection oracle plus KKT residuals.
// fit:   round trip generator -> fit with per-class NMSE.
// parseval: Parseval, scaling, naive-DFT agreement and detector determinism
//        and shift-equivariance.
ValidationReport validate_target(const std::string& target, const Scenario& scenario,
                                 const ValidationBudget& budget = {});

const std::vector<std::string>& validation_targets();

// Labelled traces for fitting: per sampling rate, `repetitions` rounds of a
// static segment followed by each action class in turn.
std::vector<CsiTrace> synth_fit_traces(const SensingModelParams& model, const std::vector<double>& rates,
                                       int repetitions, std::uint64_t seed);

}  // namespace iscc
