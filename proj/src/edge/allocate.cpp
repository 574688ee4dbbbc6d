#include "iscc/edge/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "iscc/errors.hpp"

namespace iscc {

namespace {

void check(const AllocationRequest& req) {
  if (req.targets.empty()) throw InvalidArgument("allocation request has no devices");
  if (!(req.rho > 0.0)) throw InvalidArgument("rho must be positive");
  if (!(req.f_edge_total > 0.0)) throw InvalidArgument("edge budget must be positive");
  if (req.epsilon < 0.0) throw InvalidArgument("epsilon must be nonnegative");
}

}  // namespace

AllocationResult allocate(const AllocationRequest& req) {
  check(req);
  const double eps = req.epsilon > 0.0 ? req.epsilon : 1e-6 * req.f_edge_total;
  const std::size_t K = req.targets.size();
  const double scale = static_cast<double>(K) / req.rho;

  AllocationResult res;
  res.f.resize(K);
  double pos_sum = 0.0, pos_max = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    res.f[k] = std::max(req.targets[k], 0.0);
    pos_sum += res.f[k];
    pos_max = std::max(pos_max, res.f[k]);
  }
  if (pos_sum <= req.f_edge_total + eps) {
    res.kkt_residual = kkt_residual(req, res.f, 0.0, eps);
    return res;
  }

  auto fill = [&](double mu) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      res.f[k] = std::max(req.targets[k] - scale * mu, 0.0);
      s += res.f[k];
    }
    return s;
  };
  double lo = 0.0, hi = pos_max / scale;
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mu = 0.5 * (lo + hi);
    res.iterations = it + 1;
    const double s = fill(mu);
    if (std::abs(s - req.f_edge_total) < eps) break;
    if (s > req.f_edge_total)
      lo = mu;
    else
      hi = mu;
  }
  // Polish: on the support found by bisection the budget equation is linear
  // in μ; keep the exact root if it leaves the support unchanged.
  double support_sum = 0.0;
  std::size_t support = 0;
  for (std::size_t k = 0; k < K; ++k)
    if (res.f[k] > 0.0) {
      support_sum += req.targets[k];
      ++support;
    }
  if (support > 0) {
    const double exact = (support_sum - req.f_edge_total) / (scale * static_cast<double>(support));
    bool same = exact >= 0.0;
    for (std::size_t k = 0; same && k < K; ++k)
      same = (req.targets[k] - scale * exact > 0.0) == (res.f[k] > 0.0);
    if (same) {
      mu = exact;
      fill(mu);
    }
  }
  res.mu = mu;
  res.kkt_residual = kkt_residual(req, res.f, mu, eps);
  return res;
}

std::vector<double> projection_oracle(const AllocationRequest& req) {
  check(req);
  const std::size_t K = req.targets.size();
  std::vector<double> f(K);
  double pos_sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    f[k] = std::max(req.targets[k], 0.0);
    pos_sum += f[k];
  }
  if (pos_sum <= req.f_edge_total) return f;
  // Budget binds: f = max(c - θ, 0) with sum f = f_total. Scan the sorted
  // targets for the support size j where θ lands between c_(j+1) and c_(j).
  std::vector<double> c = req.targets;
  std::sort(c.begin(), c.end(), std::greater<>());
  double prefix = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    prefix += c[j];
    const double t = (prefix - req.f_edge_total) / static_cast<double>(j + 1);
    const double next = j + 1 < K ? c[j + 1] : -std::numeric_limits<double>::infinity();
    if (t >= next && t < c[j]) {
      theta = t;
      break;
    }
  }
  for (std::size_t k = 0; k < K; ++k) f[k] = std::max(req.targets[k] - theta, 0.0);
  return f;
}

double kkt_residual(const AllocationRequest& req, const std::vector<double>& f, double mu, double budget_tol) {
  check(req);
  if (f.size() != req.targets.size()) throw InvalidArgument("allocation size mismatch");
  const double K = static_cast<double>(f.size());
  const double a = req.rho / K;
  const double total = std::accumulate(f.begin(), f.end(), 0.0);
  // Stationarity is measured in units of the budget: divide by a to express
  // μ as a resource shift (K/ρ) μ.
  double r = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double g = (a * (f[k] - req.targets[k]) + mu) / a / req.f_edge_total;
    if (f[k] > 0.0)
      r = std::max(r, std::abs(g));
    else
      r = std::max(r, std::max(0.0, -g));
    r = std::max(r, std::max(0.0, -f[k]) / req.f_edge_total);
  }
  const double excess = total - req.f_edge_total;
  r = std::max(r, std::max(0.0, excess - budget_tol) / req.f_edge_total);
  r = std::max(r, std::max(0.0, -mu));
  // Complementary slackness with μ expressed as a resource shift.
  const double shift = mu / a;
  r = std::max(r, std::max(0.0, std::abs(shift * excess) - shift * budget_tol) /
                      (req.f_edge_total * req.f_edge_total));
  return r;
}

double implied_multiplier(const AllocationRequest& req, const std::vector<double>& f) {
  check(req);
  const double total = std::accumulate(f.begin(), f.end(), 0.0);
  if (total < req.f_edge_total * (1.0 - 1e-12)) return 0.0;
  double shift = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] > 0.0) {
      shift += req.targets[k] - f[k];
      ++count;
    }
  if (count == 0) return 0.0;
  return std::max(0.0, shift / static_cast<double>(count)) * req.rho / static_cast<double>(f.size());
}

}  // namespace iscc
