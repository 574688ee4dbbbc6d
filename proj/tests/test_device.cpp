#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "iscc/device/device_opt.hpp"
#include "iscc/errors.hpp"
#include "iscc/exp/scenario.hpp"
#include "iscc/perf/perf_model.hpp"
#include "iscc/stat/delta_stats.hpp"
#include "oracles.hpp"

using namespace iscc;

namespace {

using Eval = oracle::RateEval;

Eval brute(const DeviceProfile& d, const SystemConfig& s, const SensingModelParams& m, int F) {
  return oracle::eval_rate(d, s, m, F);
}

double objective(const Eval& e, double f, double beta, double rho) {
  const double f_hat = std::max(f + beta / rho, e.gamma);
  const double gap = f - f_hat + beta / rho;
  return e.acc - 0.5 * rho * gap * gap;
}

}  // namespace

TEST_CASE("scheme names round trip") {
  CHECK(Scheme::parse("proposed").kind == Scheme::Kind::proposed);
  CHECK(Scheme::parse("conventional").kind == Scheme::Kind::conventional);
  const Scheme f = Scheme::parse("fixed-tau=0.3");
  CHECK(f.kind == Scheme::Kind::fixed_tau);
  CHECK(f.tau0 == 0.3);
  CHECK(f.name() == "fixed-tau=0.3");
  CHECK_THROWS_AS(Scheme::parse("fixed-tau=abc"), InvalidArgument);
  CHECK_THROWS_AS(Scheme::parse("greedy"), InvalidArgument);
}

TEST_CASE("detection step: limits and post-check") {
  const auto m = default_sensing_model();
  // p_min = 0.5 is met at the smallest admissible step.
  for (int F : {50, 200}) {
    const auto u = required_tau_detection(m, 0.5, F);
    REQUIRE(u);
    CHECK(*u == doctest::Approx(2.0 / F));
  }
  double prev = 1e300;
  for (int F = 30; F <= 500; F += 10) {
    const auto u = required_tau_detection(m, 0.02, F);
    if (!u) continue;
    CHECK(*u <= prev + 1e-12);
    CHECK(crossing_point(m, F, *u).p <= 0.02);
    if (*u - 1e-4 >= 2.0 / F) CHECK(crossing_point(m, F, *u - 1e-4).p > 0.02);
    prev = *u;
  }
  CHECK_FALSE(required_tau_detection(m, 0.02, 1));
  CHECK_FALSE(required_tau_detection(m, 1e-12, 40));
}

TEST_CASE("power-limited step") {
  SystemConfig s;
  DeviceProfile d;
  d.priors = {0.4, 0.6};
  d.gains = {1e-12};
  const int F = 100;
  const double others = (1 - s.t_s * F) * d.P_tx * 0.6 + d.E_s * F;
  d.P_max = others + 2.0 * d.E_c * s.window_len_s * F / s.window_len_s;
  CHECK(*required_tau_power(d, s, F) == doctest::Approx(s.window_len_s / 2));
  d.P_max = others;
  CHECK_FALSE(required_tau_power(d, s, F));
  d.P_max = 1e9;
  CHECK(*required_tau_power(d, s, F) == doctest::Approx(d.E_c * s.window_len_s * F / 1e9).epsilon(1e-6));
}

TEST_CASE("optimal step is the largest lower bound") {
  const auto sc = generate_scenario(ScenarioParams{}, 3);
  for (const auto& d : sc.devices) {
    for (int F = 20; F <= 300; F += 20) {
      const auto t = optimal_tau(d, sc.sys, sc.model, F);
      const Eval e = brute(d, sc.sys, sc.model, F);
      CHECK(bool(t) == (e.ok || !min_edge_resource(d, sc.sys, F)));
      if (!t) continue;
      CHECK(*t == doctest::Approx(e.tau).epsilon(1e-9));
      // Post-check: all three constraints hold, and a smaller step breaks one.
      const double T = sc.sys.window_len_s;
      CHECK(crossing_point(sc.model, F, *t).p <= sc.sys.p_min + 1e-9);
      CHECK(power_overall(d, sc.sys, F, *t).overall <= d.P_max * (1 + 1e-9));
      CHECK(delay_components(d, sc.sys, F, 1e9).compute <= *t + 1e-12);
      const double s = *t - 1e-4;
      if (s >= 2.0 / F) {
        const bool broken = crossing_point(sc.model, F, s).p > sc.sys.p_min ||
                            power_overall(d, sc.sys, F, s).overall > d.P_max ||
                            delay_components(d, sc.sys, F, 1e9).compute > s;
        CHECK(broken);
      }
      CHECK(*t <= T);
    }
  }
}

TEST_CASE("edge resource bound and sampling-rate cap") {
  // Rate term 1e6 bit/s, N T V_L (1 - q1) = 576, T_max = 0.576: second term 1e-3.
  SystemConfig s;
  s.B = 1e6;
  s.t_s = 1e-3;
  s.T_max = 0.576;
  DeviceProfile d;
  d.priors = {0.4, 0.6};
  d.gains.assign(10, double(s.N) * s.noise_sigma_sq() / d.P_tx);
  CHECK(f_max_bound(d, s) == 500);
  CHECK(min_edge_resource(d, s, 499));
  CHECK_FALSE(min_edge_resource(d, s, 501));

  d.priors = {1.0, 0.0};
  CHECK(f_max_bound(d, s) == 1000);
  CHECK(*min_edge_resource(d, s, 100) == 0.0);

  d.priors = {0.4, 0.6};
  s.V_L = 1e-12;
  CHECK(f_max_bound(d, s) >= 999);
}

TEST_CASE("edge request rule") {
  CHECK(optimal_f_hat(7.0, 0.0, 1.0, 5.0) == 7.0);
  CHECK(optimal_f_hat(7.0, 0.0, 1.0, 9.0) == 9.0);
  CHECK(optimal_f_hat(5.0, 4.0, 2.0, 6.0) == 7.0);
  CHECK_THROWS_AS(optimal_f_hat(1.0, 0.0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("device solver equals an exhaustive re-evaluation") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed : {1u, 2u}) {
    const auto sc = generate_scenario(ScenarioParams{}, seed);
    for (std::size_t k = 0; k < sc.devices.size(); k += 4) {
      const auto& d = sc.devices[k];
      const double unit = 1e9;
      DeviceSolver solver(d, sc.sys, sc.model, Scheme::proposed(), nullptr, unit);
      std::vector<Eval> evals;
      for (int F = 1; F <= f_max_bound(d, sc.sys); ++F) evals.push_back(brute(d, sc.sys, sc.model, F));
      for (int trial = 0; trial < 4; ++trial) {
        const double f = 5.0 * u(rng), beta = u(rng) - 0.5, rho = 0.5 + u(rng);
        const DecisionPoint got = solver.solve(f, beta, rho);
        // Idle option: no upload, static prior accuracy, request clamped at zero.
        const double idle_hat = std::max(f + beta / rho, 0.0);
        const double idle_gap = f - idle_hat + beta / rho;
        double best = d.q_static() - 0.5 * rho * idle_gap * idle_gap;
        int bestF = 0;
        for (int F = 1; F <= int(evals.size()); ++F) {
          Eval e = evals[std::size_t(F - 1)];
          if (!e.ok) continue;
          e.gamma /= unit;
          const double o = objective(e, f, beta, rho);
          if (o > best + 1e-12) {
            best = o;
            bestF = F;
          }
        }
        CHECK(got.objective == doctest::Approx(best).epsilon(1e-9));
        CHECK(got.F == bestF);
        CHECK(got.feasible == (bestF > 0));
        if (bestF == 0) continue;
        // Feasibility of the returned point against the perf model.
        CHECK(crossing_point(sc.model, got.F, got.tau).p <= sc.sys.p_min + 1e-9);
        CHECK(power_overall(d, sc.sys, got.F, got.tau).overall <= d.P_max + 1e-9);
        CHECK(delay_components(d, sc.sys, got.F, got.f_hat * unit).compute <= got.tau + 1e-9);
        const auto dl = delay_components(d, sc.sys, got.F, got.f_hat * unit);
        CHECK(dl.transmit + dl.recognition <= sc.sys.T_max * (1 + 1e-9));
        CHECK(got.F <= f_max_bound(d, sc.sys));
        const auto op = operating_point(sc.model, got.F, got.tau, got.eta);
        CHECK(std::abs(op.p_false - *std::max_element(op.p_miss.begin(), op.p_miss.end())) < 1e-9);
      }
    }
  }
}

TEST_CASE("slack resource gives the pure-accuracy optimum with zero penalty") {
  const auto sc = generate_scenario(ScenarioParams{}, 5);
  const auto& d = sc.devices[0];
  DeviceSolver solver(d, sc.sys, sc.model, Scheme::proposed(), nullptr, 1e9);
  double best = 0.0;
  for (const auto& c : solver.candidates()) best = std::max(best, c.accuracy);
  const DecisionPoint p = solver.solve(1e3, 0.0, 1.0);
  CHECK(p.accuracy == best);
  CHECK(p.objective == best);
  CHECK(p.f_hat == 1e3);
}

TEST_CASE("more power or delay budget never lowers the best accuracy") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto sc = generate_scenario(ScenarioParams{}, seed);
    const auto taus = std::make_shared<DetectionTauTable>(sc.model, sc.sys.p_min);
    for (const auto& d0 : sc.devices) {
      auto best = [&](const DeviceProfile& d, const SystemConfig& s) {
        return DeviceSolver(d, s, sc.model, Scheme::proposed(), taus, 1e9).solve(1e3, 0.0, 1.0).accuracy;
      };
      const double a0 = best(d0, sc.sys);
      DeviceProfile d1 = d0;
      d1.P_max *= 1.5;
      CHECK(best(d1, sc.sys) >= a0);
      SystemConfig s1 = sc.sys;
      s1.T_max *= 1.5;
      CHECK(best(d0, s1) >= a0);
    }
  }
}

TEST_CASE("single feasible rate is returned") {
  // Widely separated classes so detection is easy; T_max leaves F^max = 2.
  SensingModelParams m = default_sensing_model();
  SystemConfig s;
  DeviceProfile d;
  for (const auto& c : m.classes) d.priors.push_back(c.q);
  d.gains.assign(10, 1e-13);
  AccuracySurface::Parametric low_rate;
  low_rate.F0 = 0.5;
  d.surface = std::make_shared<AccuracySurface>(AccuracySurface::parametric(low_rate));
  for (auto& c : m.classes)
    if (c.class_id > 1) c.lambda *= 50.0;
  const double R = data_rate(d, s);
  const double per = 1.0 / 2.5 - s.t_s;
  s.T_max = s.N * s.window_len_s * s.V_L * 0.6 / (per * R);
  DeviceSolver solver(d, s, m);
  REQUIRE(solver.f_max() == 2);
  REQUIRE(solver.candidates().size() == 1);
  CHECK(solver.solve(1e15, 0.0, 1.0).F == 2);

  // A grant below γ costs more in penalty than the rate gains, so idling wins.
  CHECK(solver.solve(0.5 * solver.candidates()[0].gamma, 0.0, 1.0).F == 0);
}

TEST_CASE("fallback, cap search and curve output") {
  const auto sc = generate_scenario(ScenarioParams{}, 2);
  const auto& d = sc.devices[1];
  DeviceSolver solver(d, sc.sys, sc.model, Scheme::proposed(), nullptr, 1e9);
  const auto fb = solver.fallback();
  CHECK(fb.F == 0);
  CHECK_FALSE(fb.feasible);
  CHECK(fb.accuracy == d.q_static());
  CHECK_FALSE(solver.best_under_cap(0.0));
  const auto cap = solver.best_under_cap(10.0);
  REQUIRE(cap);
  for (const auto& c : solver.candidates())
    if (c.gamma <= 10.0) CHECK(c.accuracy <= cap->accuracy);
  std::ostringstream os;
  solver.write_objective_curve(os, 1.0, 0.0, 1.0);
  const std::string csv = os.str();
  CHECK(csv.rfind("F,feasible,tau,eta,gamma,f_hat,accuracy,objective\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == solver.f_max() + 1);
}

TEST_CASE("baseline schemes restrict or relax the candidate set") {
  const auto sc = generate_scenario(ScenarioParams{}, 4);
  const auto taus = std::make_shared<DetectionTauTable>(sc.model, sc.sys.p_min);
  for (const auto& d : sc.devices) {
    DeviceSolver prop(d, sc.sys, sc.model, Scheme::proposed(), taus, 1e9);
    DeviceSolver fixed(d, sc.sys, sc.model, Scheme::fixed_tau(0.3), taus, 1e9);
    DeviceSolver conv(d, sc.sys, sc.model, Scheme::conventional(), nullptr, 1e9);
    CHECK(fixed.candidates().size() <= prop.candidates().size());
    for (const auto& c : fixed.candidates()) CHECK(c.tau == 0.3);
    CHECK(conv.trigger_prob() == 1.0);
    CHECK(fixed.solve(1e3, 0, 1).accuracy <= prop.solve(1e3, 0, 1).accuracy);
  }
}
