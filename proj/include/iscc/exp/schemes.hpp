#pragma once

#include <memory>

#include "iscc/admm/admm.hpp"
#include "iscc/exp/scenario.hpp"

namespace iscc {

// proposed: ADMM over the full decision space. conventional: every window is
// uploaded (trigger probability 1 in rate, power and edge load) and the
// detection constraints are dropped. fixed-tau: τ pinned, devices whose
// minimal feasible step exceeds it fall back to q_{k,1}.
Solution run_scheme(const Scenario& scenario, const Scheme& scheme, const AdmmOptions& options = {},
                    std::shared_ptr<const DetectionTauTable> taus = nullptr);

// Largest relative violation of the power, local-compute, delay, rate-bound
// and (where applicable) detection constraints over all devices.
double constraint_violation(const Scenario& scenario, const Scheme& scheme, const Solution& solution);

}  // namespace iscc
