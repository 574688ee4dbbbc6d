#pragma once

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "iscc/perf/system.hpp"
#include "iscc/stat/sensing_model.hpp"

namespace iscc {

struct Scheme {
  enum class Kind { proposed, conventional, fixed_tau };
  Kind kind = Kind::proposed;
  double tau0 = 0.0;  // fixed_tau only

  static Scheme proposed() { return {}; }
  static Scheme conventional() { return {Kind::conventional, 0.0}; }
  static Scheme fixed_tau(double tau) { return {Kind::fixed_tau, tau}; }
  // "proposed", "conventional", "fixed-tau=<s>".
  static Scheme parse(const std::string& text);
  std::string name() const;
};

struct DecisionPoint {
  int F = 0;            // 0 marks the infeasible fallback
  double tau = 0.0;
  double eta = 0.0;
  double f_hat = 0.0;   // in the solver's resource unit
  double accuracy = 0.0;
  double objective = 0.0;
  bool feasible = false;
};

// Smallest τ in [2/F, T^s] whose crossing error is at most p_min; nullopt if
// even τ = T^s fails or the classes do not separate.
std::optional<double> required_tau_detection(const SensingModelParams& model, double p_min, int F);

// v(F) = E_c T F / (P_max - (1 - t_s F) P_tx ρ_tx - E_s F); nullopt when the
// denominator is not positive.
std::optional<double> required_tau_power(const DeviceProfile& dev, const SystemConfig& sys, int F,
                                         double trigger_prob);
std::optional<double> required_tau_power(const DeviceProfile& dev, const SystemConfig& sys, int F);

// max{u, v, T F C_L / f_L, 2/F}; nullopt if any part is infeasible or the
// result exceeds T^s.
std::optional<double> optimal_tau(const DeviceProfile& dev, const SystemConfig& sys,
                                  const SensingModelParams& model, int F);

// γ(F) = N T F C_e ρ_tx / (T_max - N T F V_L ρ_tx / ((1 - t_s F) R)); nullopt
// when the delay slack is not positive.
std::optional<double> min_edge_resource(const DeviceProfile& dev, const SystemConfig& sys, int F,
                                        double trigger_prob);
std::optional<double> min_edge_resource(const DeviceProfile& dev, const SystemConfig& sys, int F);

// floor(1 / (t_s + N T V_L ρ_tx / (T_max R))); 0 marks an infeasible device.
int f_max_bound(const DeviceProfile& dev, const SystemConfig& sys, double trigger_prob);
int f_max_bound(const DeviceProfile& dev, const SystemConfig& sys);

double optimal_f_hat(double f_alloc, double beta, double rho, double gamma);

// Memo of u(F). u does not depend on the dual state, so one table serves
// every ADMM round and every device sharing the model and p_min.
class DetectionTauTable {
 public:
  DetectionTauTable(SensingModelParams model, double p_min);
  std::optional<double> operator()(int F) const;
  const SensingModelParams& model() const { return model_; }
  double p_min() const { return p_min_; }

 private:
  SensingModelParams model_;
  double p_min_;
  mutable std::mutex mu_;
  mutable std::unordered_map<int, std::optional<double>> memo_;
};

// Per-device solver for the penalised accuracy subproblem. The feasible
// sampling rates and their (τ, η, γ, α) are fixed at construction; solve()
// only scans them against the current (f, β, ρ).
class DeviceSolver {
 public:
  struct Candidate {
    int F = 0;
    double tau = 0.0;
    double eta = 0.0;
    double gamma = 0.0;  // resource units
    double accuracy = 0.0;
  };

  DeviceSolver(const DeviceProfile& dev, const SystemConfig& sys, const SensingModelParams& model,
               Scheme scheme = {}, std::shared_ptr<const DetectionTauTable> taus = nullptr,
               double resource_unit = 1.0);

  // Exhaustive scan over F; ties go to the smaller F. All resource values in
  // resource units.
  DecisionPoint solve(double f_alloc, double beta, double rho) const;

  // Highest pure accuracy with γ(F) <= cap; f_hat is set to cap.
  std::optional<DecisionPoint> best_under_cap(double cap) const;

  DecisionPoint fallback() const;
  const std::vector<Candidate>& candidates() const { return candidates_; }
  int f_max() const { return f_max_; }
  double trigger_prob() const { return trigger_prob_; }
  double resource_unit() const { return unit_; }

  // CSV `F,feasible,tau,eta,gamma,f_hat,accuracy,objective` over F = 1..F^max.
  void write_objective_curve(std::ostream& out, double f_alloc, double beta, double rho) const;

 private:
  DeviceProfile dev_;
  Scheme scheme_;
  double unit_;
  double trigger_prob_;
  int f_max_ = 0;
  std::vector<Candidate> candidates_;
};

// One-shot subproblem solve in SI resource units.
DecisionPoint solve_device_subproblem(const DeviceProfile& dev, const SystemConfig& sys,
                                      const SensingModelParams& model, double f_alloc, double beta,
                                      double rho);

}  // namespace iscc
