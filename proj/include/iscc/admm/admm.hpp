#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <json.hpp>

#include "iscc/device/device_opt.hpp"
#include "iscc/perf/system.hpp"
#include "iscc/stat/sensing_model.hpp"

namespace iscc {

struct AdmmOptions {
  double rho = 1.0;
  double epsilon = 0.0;  // primal/dual tolerance in cycles/s; 0 selects 1e-3 f_edge_total
  int i_max = 200;
  unsigned threads = 1;  // device-phase workers
};

// One scalar crossing the device/edge boundary. Values are in the
// normalised resource unit (f_edge_total / K).
struct Message {
  enum class Kind { request, grant };
  int iteration = 0;  // 0 is the warm-start round
  int device = 0;
  Kind kind = Kind::request;
  double value = 0.0;
};

struct AdmmState {
  std::vector<double> beta;
  std::vector<double> f;
  std::vector<double> f_hat;
  double rho = 1.0;
  double resource_unit = 1.0;  // cycles/s per normalised unit
  int iter = 0;
  std::vector<double> primal_history;  // max_k |f_k - f̂_k| per round, cycles/s
  std::vector<double> dual_history;    // max_k |f_k - f_k^prev| per round, cycles/s
};

struct Solution {
  std::vector<DecisionPoint> decisions;  // f_hat in cycles/s
  std::vector<double> allocations;       // cycles/s
  double accuracy = 0.0;
  bool converged = false;
  bool recovered = false;  // final shares came from the admission pass
  int iterations = 0;
  AdmmState state;
  std::vector<Message> messages;
};

struct AdmmProblem {
  SystemConfig sys;
  std::vector<DeviceProfile> devices;
  SensingModelParams model;
  Scheme scheme;
  std::shared_ptr<const DetectionTauTable> taus;  // optional shared memo
};

// Bulk-synchronous rounds: devices solve their subproblems and request
// f̂ - β/ρ; the edge allocates; duals move by ρ (f - f̂). The warm-start round
// requests each device's unpenalised need. Stops when both the primal residual
// max|f - f̂| and the change in allocations fall to ε. Every device then keeps
// its most accurate sampling rate whose edge need fits its final grant.
Solution run_admm(const AdmmProblem& problem, const AdmmOptions& options = {});

// 2K messages per round: one request and one grant per device.
const std::vector<Message>& message_log(const Solution& s);

struct Replay {
  std::vector<double> f;     // last grants
  std::vector<double> beta;  // ρ (grant - request) of the last round
};
Replay replay_messages(const std::vector<Message>& log, std::size_t K, double rho);

// Average of q1 + sum q_i α(F_k, τ_k), recomputed from decisions.
double overall_accuracy(const std::vector<DeviceProfile>& devices, const std::vector<DecisionPoint>& d);

void write_residual_csv(std::ostream& out, const Solution& s);
// verbose adds the message transcript.
nlohmann::json run_artifact(const Solution& s, bool verbose);

}  // namespace iscc
