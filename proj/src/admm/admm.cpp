#include "iscc/admm/admm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>

#include "iscc/edge/allocate.hpp"
#include "iscc/errors.hpp"
#include "iscc/perf/perf_model.hpp"

namespace iscc {

namespace {

void validate_problem(const AdmmProblem& p, const AdmmOptions& o) {
  std::string bad;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) bad += (bad.empty() ? "" : "; ") + what;
  };
  try {
    p.sys.validate();
  } catch (const Error& e) {
    need(false, e.what());
  }
  need(!p.devices.empty(), "no devices");
  for (const auto& d : p.devices) {
    try {
      d.validate();
    } catch (const Error& e) {
      need(false, e.what());
    }
    need(d.surface != nullptr, "device " + std::to_string(d.id) + " has no accuracy surface");
  }
  need(o.rho > 0.0, "rho must be positive");
  need(o.i_max >= 1, "i_max must be >= 1");
  need(o.epsilon >= 0.0, "epsilon must be nonnegative");
  if (!bad.empty()) throw ValidationError(bad);
}

template <class Fn>
void for_each_device(std::size_t K, unsigned threads, Fn fn) {
  if (threads <= 1 || K <= 1) {
    for (std::size_t k = 0; k < K; ++k) fn(k);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, K);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < K; k += workers) fn(k);
    }));
  for (auto& j : jobs) j.get();
}

}  // namespace

Solution run_admm(const AdmmProblem& problem, const AdmmOptions& options) {
  validate_problem(problem, options);
  const std::size_t K = problem.devices.size();
  const double unit = problem.sys.f_edge_total / static_cast<double>(K);
  const double budget = static_cast<double>(K);  // f_edge_total in units
  const double rho = options.rho;
  const double eps = (options.epsilon > 0.0 ? options.epsilon : 1e-3 * problem.sys.f_edge_total) / unit;

  auto taus = problem.taus;
  if (!taus && problem.scheme.kind != Scheme::Kind::conventional)
    taus = std::make_shared<DetectionTauTable>(problem.model, problem.sys.p_min);

  std::vector<std::unique_ptr<DeviceSolver>> solvers(K);
  for_each_device(K, options.threads, [&](std::size_t k) {
    solvers[k] = std::make_unique<DeviceSolver>(problem.devices[k], problem.sys, problem.model, problem.scheme,
                                                taus, unit);
  });

  Solution sol;
  AdmmState& st = sol.state;
  st.rho = rho;
  st.resource_unit = unit;
  st.beta.assign(K, 0.0);
  st.f_hat.assign(K, 0.0);
  std::vector<DecisionPoint> decisions(K);

  auto log = [&](int iter, Message::Kind kind, const std::vector<double>& v) {
    for (std::size_t k = 0; k < K; ++k) sol.messages.push_back({iter, static_cast<int>(k), kind, v[k]});
  };

  // Warm start: each device asks for the edge share of its best unpenalised point.
  {
    std::vector<double> req(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const auto best = solvers[k]->best_under_cap(std::numeric_limits<double>::infinity());
      if (best) {
        for (const auto& c : solvers[k]->candidates())
          if (c.F == best->F) req[k] = c.gamma;
      }
    }
    log(0, Message::Kind::request, req);
    st.f = allocate({req, rho, budget, 0.0}).f;
    log(0, Message::Kind::grant, st.f);
  }

  for (int it = 1; it <= options.i_max; ++it) {
    for_each_device(K, options.threads,
                    [&](std::size_t k) { decisions[k] = solvers[k]->solve(st.f[k], st.beta[k], rho); });
    std::vector<double> req(K);
    for (std::size_t k = 0; k < K; ++k) {
      st.f_hat[k] = decisions[k].f_hat;
      req[k] = st.f_hat[k] - st.beta[k] / rho;
    }
    log(it, Message::Kind::request, req);
    const AllocationResult alloc = allocate({req, rho, budget, 0.0});
    log(it, Message::Kind::grant, alloc.f);

    double primal = 0.0, dual = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      st.beta[k] = st.beta[k] + rho * (alloc.f[k] - st.f_hat[k]);
      primal = std::max(primal, std::abs(alloc.f[k] - st.f_hat[k]));
      dual = std::max(dual, std::abs(alloc.f[k] - st.f[k]));
    }
    st.f = alloc.f;
    st.iter = it;
    st.primal_history.push_back(primal * unit);
    st.dual_history.push_back(dual * unit);
    if (primal <= eps && dual <= eps) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = st.iter;

  // Final check against the granted share; the last grant already is the
  // projection of the last requests onto the edge budget.
  auto settle = [&](const std::vector<double>& grant, std::vector<DecisionPoint>& out) {
    out.resize(K);
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const auto best = solvers[k]->best_under_cap(grant[k]);
      out[k] = best ? *best : solvers[k]->fallback();
      out[k].f_hat = best ? grant[k] * unit : 0.0;
      acc += out[k].accuracy;
    }
    return acc;
  };
  std::vector<DecisionPoint> projected;
  const double acc_projected = settle(st.f, projected);

  // Recovery when the rounds did not settle: each device reports the edge
  // share of its last point (or its cheapest one), and the edge admits the
  // smallest demands first and splits what is left evenly.
  std::vector<double> admitted(K, 0.0);
  {
    std::vector<double> demand(K, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < K; ++k) {
      for (const auto& c : solvers[k]->candidates())
        if (decisions[k].F <= 0 || c.F == decisions[k].F) demand[k] = std::min(demand[k], c.gamma);
    }
    std::vector<std::size_t> order(K);
    for (std::size_t k = 0; k < K; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return demand[a] < demand[b]; });
    double left = budget;
    for (std::size_t k : order)
      if (demand[k] <= left) {
        admitted[k] = demand[k];
        left -= demand[k];
      }
    for (auto& a : admitted) a += left / static_cast<double>(K);
  }
  std::vector<DecisionPoint> recovered;
  const double acc_recovered = settle(admitted, recovered);

  sol.recovered = acc_recovered > acc_projected;
  sol.decisions = sol.recovered ? recovered : projected;
  sol.allocations.resize(K);
  for (std::size_t k = 0; k < K; ++k) sol.allocations[k] = (sol.recovered ? admitted[k] : st.f[k]) * unit;
  sol.accuracy = overall_accuracy(problem.devices, sol.decisions);
  return sol;
}

const std::vector<Message>& message_log(const Solution& s) { return s.messages; }

Replay replay_messages(const std::vector<Message>& log, std::size_t K, double rho) {
  Replay r;
  r.f.assign(K, 0.0);
  r.beta.assign(K, 0.0);
  std::vector<double> request(K, 0.0);
  for (const auto& m : log) {
    const auto k = static_cast<std::size_t>(m.device);
    if (k >= K) throw InvalidArgument("message for unknown device");
    if (m.kind == Message::Kind::request) {
      request[k] = m.value;
    } else {
      r.f[k] = m.value;
      r.beta[k] = m.iteration == 0 ? 0.0 : rho * (m.value - request[k]);
    }
  }
  return r;
}

double overall_accuracy(const std::vector<DeviceProfile>& devices, const std::vector<DecisionPoint>& d) {
  if (devices.size() != d.size() || devices.empty()) throw InvalidArgument("decision count mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
    total += d[k].F > 0 ? device_accuracy(devices[k], d[k].F, d[k].tau) : devices[k].q_static();
  return total / static_cast<double>(d.size());
}

void write_residual_csv(std::ostream& out, const Solution& s) {
  out << "iteration,primal_residual,dual_residual\n" << std::setprecision(12);
  for (std::size_t i = 0; i < s.state.primal_history.size(); ++i)
    out << i + 1 << ',' << s.state.primal_history[i] << ',' << s.state.dual_history[i] << '\n';
}

nlohmann::json run_artifact(const Solution& s, bool verbose) {
  nlohmann::json j;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["recovered"] = s.recovered;
  j["accuracy"] = s.accuracy;
  j["rho"] = s.state.rho;
  j["resource_unit"] = s.state.resource_unit;
  j["primal_residual"] = s.state.primal_history;
  j["dual_residual"] = s.state.dual_history;
  auto dec = nlohmann::json::array();
  for (std::size_t k = 0; k < s.decisions.size(); ++k) {
    const auto& d = s.decisions[k];
    dec.push_back({{"device", k},
                   {"F", d.F},
                   {"tau", d.tau},
                   {"eta", d.eta},
                   {"f_edge", s.allocations[k]},
                   {"accuracy", d.accuracy},
                   {"feasible", d.feasible}});
  }
  j["decisions"] = dec;
  if (verbose) {
    auto msgs = nlohmann::json::array();
    for (const auto& m : s.messages)
      msgs.push_back({m.iteration, m.device, m.kind == Message::Kind::request ? "request" : "grant", m.value});
    j["messages"] = msgs;
  }
  return j;
}

}  // namespace iscc
