#include "iscc/stat/delta_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "iscc/errors.hpp"

namespace iscc {

namespace {

void check_point(const SensingModelParams& model, double F, double tau) {
  if (!(F >= 1.0)) throw InvalidArgument("sampling rate must be >= 1");
  if (!(tau > 0.0) || tau > model.window_len_s) throw InvalidArgument("time step must lie in (0, T^s]");
}

// Q((mu - eta)/sigma), tolerating a degenerate zero variance.
double upper_tail(double mu_minus_eta, double var) {
  if (var <= 0.0) return mu_minus_eta > 0.0 ? 1.0 : (mu_minus_eta < 0.0 ? 0.0 : 0.5);
  return q_function(mu_minus_eta / std::sqrt(var));
}

}  // namespace

DeltaStats delta_moments(const SensingModelParams& model, int class_id, double F, double tau) {
  check_point(model, F, tau);
  const auto& c1 = model.cls(1);
  const auto& ci = model.cls(class_id);
  const double T = model.window_len_s;
  const double sc = model.sigma_c_sq;
  const double T3F = T * T * T * F;
  const double T4F2 = T * T * T * T * F * F;
  if (class_id == 1) {
    return {0.0, tau * tau * (8.0 * sc * c1.lambda / T3F + 4.0 * sc * c1.r / T4F2) + c1.sigma_d_sq};
  }
  const double mu = tau * ((ci.lambda - c1.lambda) / (2.0 * T) + (ci.r - c1.r) / (2.0 * T * T * F));
  const double var = tau * tau *
                         (4.0 * sc * (ci.lambda + 4.0 * c1.lambda) / (3.0 * T3F) +
                          2.0 * sc * (ci.r + 4.0 * c1.r) / (3.0 * T4F2)) +
                     ci.sigma_d_sq;
  return {mu, var};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double miss_rate(const SensingModelParams& model, int class_id, double F, double tau, double eta) {
  if (class_id < 2) throw InvalidArgument("miss rate is defined for action classes only");
  const DeltaStats d = delta_moments(model, class_id, F, tau);
  return upper_tail(d.mu - eta, d.var);
}

double false_positive_rate(const SensingModelParams& model, double F, double tau, double eta) {
  const DeltaStats d = delta_moments(model, 1, F, tau);
  return upper_tail(eta, d.var);
}

OperatingPoint operating_point(const SensingModelParams& model, double F, double tau, double eta) {
  OperatingPoint op;
  op.eta = eta;
  op.p_false = false_positive_rate(model, F, tau, eta);
  for (int i = 2; i <= static_cast<int>(model.num_classes()); ++i)
    op.p_miss.push_back(miss_rate(model, i, F, tau, eta));
  return op;
}

Crossing crossing_point(const SensingModelParams& model, double F, double tau) {
  check_point(model, F, tau);
  const int m = static_cast<int>(model.num_classes());
  if (m < 2) throw NoCrossingError("model has no action class");
  const DeltaStats s = delta_moments(model, 1, F, tau);
  std::vector<DeltaStats> act;
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 2; i <= m; ++i) {
    act.push_back(delta_moments(model, i, F, tau));
    hi = std::min(hi, act.back().mu);
  }
  if (!(hi > 0.0)) throw NoCrossingError("an action class has nonpositive mean power difference");

  auto worst_miss = [&](double eta, int* arg) {
    double best = -1.0;
    for (std::size_t j = 0; j < act.size(); ++j) {
      const double p = upper_tail(act[j].mu - eta, act[j].var);
      if (p > best) {
        best = p;
        if (arg) *arg = static_cast<int>(j) + 2;
      }
    }
    return best;
  };
  // g = p_false - max p_miss is strictly decreasing in eta. The stop test is
  // relative to the rates so small crossing errors still pin eta down.
  double lo = 0.0;
  double eta = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    eta = 0.5 * (lo + hi);
    const double pf = upper_tail(eta, s.var);
    const double pm = worst_miss(eta, nullptr);
    const double v = pf - pm;
    if (std::abs(v) < 1e-9 * (pf + pm)) break;
    if (v > 0.0)
      lo = eta;
    else
      hi = eta;
  }
  Crossing c;
  c.eta = eta;
  c.p = upper_tail(eta, s.var);
  worst_miss(eta, &c.binding_class);
  return c;
}

}  // namespace iscc
