#include "iscc/device/device_opt.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "iscc/errors.hpp"
#include "iscc/perf/perf_model.hpp"
#include "iscc/stat/delta_stats.hpp"

namespace iscc {

Scheme Scheme::parse(const std::string& text) {
  if (text == "proposed") return proposed();
  if (text == "conventional") return conventional();
  const std::string prefix = "fixed-tau=";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t pos = 0;
      const double tau = std::stod(text.substr(prefix.size()), &pos);
      if (pos == text.size() - prefix.size() && tau > 0.0) return fixed_tau(tau);
    } catch (const std::logic_error&) {
    }
  }
  throw InvalidArgument("unknown scheme '" + text + "'");
}

std::string Scheme::name() const {
  switch (kind) {
    case Kind::proposed:
      return "proposed";
    case Kind::conventional:
      return "conventional";
    case Kind::fixed_tau: {
      std::ostringstream os;
      os << "fixed-tau=" << tau0;
      return os.str();
    }
  }
  return "proposed";
}

std::optional<double> required_tau_detection(const SensingModelParams& model, double p_min, int F) {
  if (F < 1) throw InvalidArgument("sampling rate must be >= 1");
  const double T = model.window_len_s;
  double lo = 2.0 / F;
  double hi = T;
  if (lo > hi) return std::nullopt;
  auto pc = [&](double tau) { return crossing_point(model, F, tau).p; };
  try {
    if (pc(hi) > p_min) return std::nullopt;
    if (pc(lo) <= p_min) return lo;
    // p_c is nonincreasing in τ, so the feasible set is [u, T].
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (pc(mid) <= p_min)
        hi = mid;
      else
        lo = mid;
    }
  } catch (const NoCrossingError&) {
    return std::nullopt;
  }
  return hi;
}

std::optional<double> required_tau_power(const DeviceProfile& dev, const SystemConfig& sys, int F,
                                         double trigger_prob) {
  const double denom =
      dev.P_max - (1.0 - sys.t_s * F) * dev.P_tx * trigger_prob - dev.E_s * static_cast<double>(F);
  if (!(denom > 0.0)) return std::nullopt;
  return dev.E_c * sys.window_len_s * F / denom;
}

std::optional<double> required_tau_power(const DeviceProfile& dev, const SystemConfig& sys, int F) {
  return required_tau_power(dev, sys, F, 1.0 - dev.q_static());
}

namespace {

std::optional<double> combine_tau(const DeviceProfile& dev, const SystemConfig& sys, int F,
                                  std::optional<double> u, double trigger_prob) {
  if (!u) return std::nullopt;
  if (sys.t_s * F >= 1.0) return std::nullopt;
  const auto v = required_tau_power(dev, sys, F, trigger_prob);
  if (!v) return std::nullopt;
  const double comp = sys.window_len_s * F * sys.C_L / dev.f_local;
  const double tau = std::max({*u, *v, comp, 2.0 / F});
  if (tau > sys.window_len_s) return std::nullopt;
  return tau;
}

}  // namespace

std::optional<double> optimal_tau(const DeviceProfile& dev, const SystemConfig& sys,
                                  const SensingModelParams& model, int F) {
  return combine_tau(dev, sys, F, required_tau_detection(model, sys.p_min, F), 1.0 - dev.q_static());
}

std::optional<double> min_edge_resource(const DeviceProfile& dev, const SystemConfig& sys, int F,
                                        double trigger_prob) {
  if (sys.t_s * F >= 1.0) return std::nullopt;
  const double rate = (1.0 - sys.t_s * F) * data_rate(dev, sys);
  if (!(rate > 0.0)) return std::nullopt;
  const double elements = static_cast<double>(sys.N) * sys.window_len_s * F;
  const double slack = sys.T_max - elements * sys.V_L * trigger_prob / rate;
  if (!(slack > 0.0)) return std::nullopt;
  return elements * sys.C_e * trigger_prob / slack;
}

std::optional<double> min_edge_resource(const DeviceProfile& dev, const SystemConfig& sys, int F) {
  return min_edge_resource(dev, sys, F, 1.0 - dev.q_static());
}

int f_max_bound(const DeviceProfile& dev, const SystemConfig& sys, double trigger_prob) {
  const double rate = data_rate(dev, sys);
  if (!(rate > 0.0)) return 0;
  const double per_sample =
      sys.t_s + static_cast<double>(sys.N) * sys.window_len_s * sys.V_L * trigger_prob / (sys.T_max * rate);
  // Guard against representation error just below an integer boundary.
  return static_cast<int>(std::floor(1.0 / per_sample * (1.0 + 1e-15)));
}

int f_max_bound(const DeviceProfile& dev, const SystemConfig& sys) {
  return f_max_bound(dev, sys, 1.0 - dev.q_static());
}

double optimal_f_hat(double f_alloc, double beta, double rho, double gamma) {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  return std::max(f_alloc + beta / rho, gamma);
}

DetectionTauTable::DetectionTauTable(SensingModelParams model, double p_min)
    : model_(std::move(model)), p_min_(p_min) {}

std::optional<double> DetectionTauTable::operator()(int F) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(F);
    if (it != memo_.end()) return it->second;
  }
  const auto u = required_tau_detection(model_, p_min_, F);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(F, u);
  return u;
}

DeviceSolver::DeviceSolver(const DeviceProfile& dev, const SystemConfig& sys, const SensingModelParams& model,
                           Scheme scheme, std::shared_ptr<const DetectionTauTable> taus, double resource_unit)
    : dev_(dev), scheme_(scheme), unit_(resource_unit) {
  dev.validate();
  if (!(resource_unit > 0.0)) throw InvalidArgument("resource unit must be positive");
  if (!dev.surface) throw InvalidArgument("device has no accuracy surface");
  const bool conventional = scheme.kind == Scheme::Kind::conventional;
  trigger_prob_ = conventional ? 1.0 : 1.0 - dev.q_static();
  if (!conventional && !taus) taus = std::make_shared<DetectionTauTable>(model, sys.p_min);
  if (taus && (taus->p_min() != sys.p_min))
    throw InvalidArgument("detection table built for a different p_min");

  f_max_ = f_max_bound(dev, sys, trigger_prob_);
  for (int F = 1; F <= f_max_; ++F) {
    std::optional<double> u = conventional ? std::optional<double>(0.0) : (*taus)(F);
    auto tau = combine_tau(dev, sys, F, u, trigger_prob_);
    if (!tau) continue;
    if (scheme.kind == Scheme::Kind::fixed_tau) {
      if (*tau > scheme.tau0 * (1.0 + 1e-12) || scheme.tau0 > sys.window_len_s) continue;
      tau = scheme.tau0;
    }
    const auto gamma = min_edge_resource(dev, sys, F, trigger_prob_);
    if (!gamma) continue;
    if (!dev.surface->contains(F, *tau)) continue;
    Candidate c;
    c.F = F;
    c.tau = *tau;
    c.eta = conventional ? 0.0 : crossing_point(model, F, *tau).eta;
    c.gamma = *gamma / unit_;
    c.accuracy = device_accuracy(dev, F, *tau);
    candidates_.push_back(c);
  }
}

DecisionPoint DeviceSolver::fallback() const {
  DecisionPoint d;
  d.accuracy = dev_.q_static();
  d.objective = d.accuracy;
  return d;
}

DecisionPoint DeviceSolver::solve(double f_alloc, double beta, double rho) const {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  // Not uploading needs no edge share, so it competes as γ = 0.
  DecisionPoint best = fallback();
  best.f_hat = optimal_f_hat(f_alloc, beta, rho, 0.0);
  const double idle_gap = f_alloc - best.f_hat + beta / rho;
  best.objective = best.accuracy - 0.5 * rho * idle_gap * idle_gap;
  for (const auto& c : candidates_) {
    const double f_hat = optimal_f_hat(f_alloc, beta, rho, c.gamma);
    const double gap = f_alloc - f_hat + beta / rho;
    const double obj = c.accuracy - 0.5 * rho * gap * gap;
    if (obj > best.objective) {
      best = {c.F, c.tau, c.eta, f_hat, c.accuracy, obj, true};
    }
  }
  return best;
}

std::optional<DecisionPoint> DeviceSolver::best_under_cap(double cap) const {
  std::optional<DecisionPoint> best;
  for (const auto& c : candidates_) {
    if (c.gamma > cap) continue;
    if (!best || c.accuracy > best->accuracy)
      best = DecisionPoint{c.F, c.tau, c.eta, cap, c.accuracy, c.accuracy, true};
  }
  return best;
}

void DeviceSolver::write_objective_curve(std::ostream& out, double f_alloc, double beta, double rho) const {
  out << "F,feasible,tau,eta,gamma,f_hat,accuracy,objective\n" << std::setprecision(12);
  std::size_t j = 0;
  for (int F = 1; F <= f_max_; ++F) {
    if (j < candidates_.size() && candidates_[j].F == F) {
      const auto& c = candidates_[j++];
      const double f_hat = optimal_f_hat(f_alloc, beta, rho, c.gamma);
      const double gap = f_alloc - f_hat + beta / rho;
      out << F << ",1," << c.tau << ',' << c.eta << ',' << c.gamma << ',' << f_hat << ',' << c.accuracy << ','
          << c.accuracy - 0.5 * rho * gap * gap << '\n';
    } else {
      out << F << ",0,,,,,,\n";
    }
  }
}

DecisionPoint solve_device_subproblem(const DeviceProfile& dev, const SystemConfig& sys,
                                      const SensingModelParams& model, double f_alloc, double beta,
                                      double rho) {
  return DeviceSolver(dev, sys, model).solve(f_alloc, beta, rho);
}

}  // namespace iscc
