#pragma once

#include <vector>

namespace iscc {

struct AllocationRequest {
  std::vector<double> targets;  // c_k = f̂_k - β_k / ρ
  double rho = 1.0;
  double f_edge_total = 1.0;
  double epsilon = 0.0;  // 0 selects 1e-6 f_edge_total
};

struct AllocationResult {
  std::vector<double> f;
  double mu = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

// Minimises sum (f_k - c_k)² over f >= 0, sum f <= f_total via
// f_k = max{c_k - (K/ρ) μ, 0}, bisecting on μ until |sum f - f_total| < ε.
AllocationResult allocate(const AllocationRequest& req);

// Exact Euclidean projection of c onto {f >= 0, sum f <= f_total} by sorting
// and threshold search.
std::vector<double> projection_oracle(const AllocationRequest& req);

// Largest violation of the optimality system of the allocation problem:
// stationarity (ρ/K)(f_k - c_k) + μ >= 0 with equality where f_k > 0, primal
// feasibility, μ >= 0 and complementary slackness. Budget-scaled terms are
// divided by f_total. budget_tol is the allowed budget overshoot (the
// bisection tolerance ε); the exact oracle is checked with 0.
double kkt_residual(const AllocationRequest& req, const std::vector<double>& f, double mu,
                    double budget_tol = 0.0);

// μ implied by an exact solution: (ρ/K) times the common shift of the
// positive components, 0 when the budget is slack.
double implied_multiplier(const AllocationRequest& req, const std::vector<double>& f);

}  // namespace iscc
