#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "iscc/errors.hpp"
#include "iscc/exp/scenario.hpp"
#include "iscc/exp/validate.hpp"
#include "iscc/stat/delta_sampler.hpp"
#include "iscc/stat/delta_stats.hpp"
#include "iscc/stat/fit.hpp"
#include "iscc/stat/sensing_model.hpp"

using namespace iscc;

namespace {

SensingModelParams two_class(double lambda2, double r2, double sigma_c_sq, double T) {
  SensingModelParams m;
  m.window_len_s = T;
  m.sigma_c_sq = sigma_c_sq;
  m.band_lo_hz = 10.0;
  m.band_hi_hz = 60.0;
  m.classes = {{1, 1.0, 3.0, 0.0, 0.5}, {2, lambda2, r2, 0.0, 0.5}};
  return m;
}

}  // namespace

TEST_CASE("window power moments: hand example and limits") {
  SensingModelParams m = two_class(2.0, 100.0, 0.5, 1.0);
  const auto w = window_power_moments(m, 2, 100.0);
  CHECK(w.mean == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(w.var == doctest::Approx(0.05).epsilon(1e-14));

  m.classes[1].lambda = 0.0;
  m.classes[1].r = 0.0;
  const auto z = window_power_moments(m, 2, 100.0);
  CHECK(z.mean == 0.0);
  CHECK(z.var == 0.0);

  const auto d = default_sensing_model();
  double prev = 1e300;
  for (double F = 10; F <= 1e6; F *= 2) {
    const double mu = window_power_moments(d, 5, F).mean;
    CHECK(mu < prev);
    CHECK(mu > d.cls(5).lambda);
    prev = mu;
  }
  CHECK(prev == doctest::Approx(d.cls(5).lambda).epsilon(1e-4));
}

TEST_CASE("sensing model validation and json round trip") {
  const auto d = default_sensing_model(0.4);
  CHECK_NOTHROW(d.validate());
  CHECK(d.num_classes() == 8);
  double q = 0.0;
  for (const auto& c : d.classes) q += c.q;
  CHECK(q == doctest::Approx(1.0));
  CHECK(d.cls(1).q == doctest::Approx(0.4));
  CHECK(d.cls(3).q == doctest::Approx(0.6 / 7));

  nlohmann::json j = d;
  const auto back = j.get<SensingModelParams>();
  CHECK(back.sigma_c_sq == d.sigma_c_sq);
  CHECK(back.cls(8).r == d.cls(8).r);

  auto bad = d;
  bad.classes[2].q += 0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = d;
  bad.sigma_c_sq = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_THROWS(d.cls(9));
}

TEST_CASE("delta moments: static and symmetric classes") {
  const auto d = default_sensing_model();
  for (double F : {50.0, 200.0})
    for (double tau : {0.1, 0.7}) CHECK(delta_moments(d, 1, F, tau).mu == 0.0);
  auto m = two_class(1.0, 3.0, 0.09, 1.5);
  CHECK(delta_moments(m, 2, 100.0, 0.4).mu == 0.0);
}

TEST_CASE("delta moments: trends in F and tau") {
  const auto d = default_sensing_model();
  for (int i = 2; i <= 8; ++i) {
    for (double tau : {0.2, 0.6, 1.2}) {
      DeltaStats prev{1e300, 1e300};
      for (double F = 20; F <= 800; F += 20) {
        const auto s = delta_moments(d, i, F, tau);
        CHECK(s.mu < prev.mu);
        CHECK(s.var < prev.var);
        prev = s;
      }
    }
    for (double F : {40.0, 300.0}) {
      DeltaStats prev{-1.0, -1.0};
      for (double tau = 0.05; tau <= 1.5; tau += 0.05) {
        const auto s = delta_moments(d, i, F, tau);
        CHECK(s.mu > prev.mu);
        CHECK(s.var > prev.var);
        prev = s;
      }
    }
  }
}

TEST_CASE("delta moments match direct sampling of the two-window construction") {
  // Independent sampler: window powers are normal with the closed-form
  // moments; the entering step holds the action for the last t seconds.
  const auto d = default_sensing_model();
  const double T = d.window_len_s;
  const std::uint64_t n = 1'000'000;
  for (auto [F, tau, cls] : {std::tuple{100.0, 0.5, 2}, std::tuple{250.0, 1.0, 8}, std::tuple{60.0, 0.3, 1}}) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, tau);
    const auto wi = window_power_moments(d, cls, F);
    const auto w1 = window_power_moments(d, 1, F);
    const double si = std::sqrt(wi.var), s1 = std::sqrt(w1.var);
    auto draw = [&](double t) {
      const double action = wi.mean + si * g(rng);
      const double rest = w1.mean + s1 * g(rng);
      const double leaving = w1.mean + s1 * g(rng);
      return (t * action + (tau - t) * rest - tau * leaving) / T +
             std::sqrt(d.cls(cls).sigma_d_sq) * g(rng);
    };
    double sum = 0.0, half_sq = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
      const double t = cls == 1 ? 0.0 : u(rng);
      const double a = draw(t), b = draw(t);
      sum += a;
      half_sq += 0.5 * (a - b) * (a - b);
    }
    const auto s = delta_moments(d, cls, F, tau);
    const double mean = sum / double(n), var = half_sq / double(n);
    if (cls == 1)
      CHECK(std::abs(mean) < 0.01 * std::sqrt(s.var));
    else
      CHECK(std::abs(mean / s.mu - 1.0) < 0.01);
    CHECK(std::abs(var / s.var - 1.0) < 0.03);
  }
}

TEST_CASE("q function") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(q_function(1.6449) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(std::abs(q_function(1.6449) - 0.05) < 1e-4);
  for (double x : {0.1, 0.9, 2.5, 6.0}) CHECK(std::abs(q_function(-x) - (1.0 - q_function(x))) < 1e-12);
}

TEST_CASE("miss and false-positive rates at normal quantiles") {
  // Class 2 with μ = 2, σ = 1 and static σ = 1: σc² = 0 leaves only the
  // deviation terms; λ sets μ = τ Δλ / (2T) with r = 0.
  SensingModelParams m = two_class(1.0 + 4.0, 0.0, 0.0, 1.0);
  m.classes[0].r = 0.0;
  m.classes[0].sigma_d_sq = 1.0;
  m.classes[1].sigma_d_sq = 1.0;
  const auto s = delta_moments(m, 2, 100.0, 1.0);
  REQUIRE(s.mu == doctest::Approx(2.0));
  REQUIRE(s.var == doctest::Approx(1.0));
  CHECK(miss_rate(m, 2, 100.0, 1.0, 2.0) == doctest::Approx(0.5));
  CHECK(std::abs(miss_rate(m, 2, 100.0, 1.0, 0.3551) - 0.05) < 1e-3);
  CHECK(false_positive_rate(m, 100.0, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(std::abs(false_positive_rate(m, 100.0, 1.0, 1.2816) - 0.10) < 1e-3);

  // Symmetric case: crossing at μ/2 with error Q(1).
  const Crossing c = crossing_point(m, 100.0, 1.0);
  CHECK(c.eta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(c.p == doctest::Approx(q_function(1.0)).epsilon(1e-8));
  CHECK_THROWS_AS(miss_rate(m, 1, 100.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("crossing point matches a fine grid scan") {
  const auto d = default_sensing_model();
  for (auto [F, tau] : {std::pair{60.0, 0.3}, std::pair{200.0, 0.9}, std::pair{400.0, 1.5}}) {
    const Crossing c = crossing_point(d, F, tau);
    double lo_mu = 1e300;
    for (int i = 2; i <= 8; ++i) lo_mu = std::min(lo_mu, delta_moments(d, i, F, tau).mu);
    // Sign change of FP - worst miss on a 1e-6 grid.
    double found = -1.0;
    double prev_g = 1.0;
    for (double eta = 0.0; eta <= lo_mu; eta += 1e-6) {
      const auto op = operating_point(d, F, tau, eta);
      const double g = op.p_false - *std::max_element(op.p_miss.begin(), op.p_miss.end());
      if (prev_g > 0.0 && g <= 0.0) {
        found = eta;
        break;
      }
      prev_g = g;
    }
    REQUIRE(found >= 0.0);
    CHECK(std::abs(c.eta - found) <= 1e-6);
    const auto op = operating_point(d, F, tau, c.eta);
    CHECK(std::abs(op.p_false - c.p) < 1e-9);
    CHECK(c.binding_class >= 2);
  }
}

TEST_CASE("crossing error is nonincreasing in tau and rates are monotone in eta") {
  const auto d = default_sensing_model();
  for (double F = 40; F <= 400; F += 40) {
    double prev = 1.0;
    for (double tau = 0.05; tau <= 1.5; tau += 0.05) {
      const double p = crossing_point(d, F, tau).p;
      CHECK(p <= prev + 1e-9);
      prev = p;
    }
  }
  const auto a = operating_point(d, 200.0, 0.3, 0.01);
  const auto b = operating_point(d, 200.0, 0.3, 0.02);
  CHECK(b.p_false < a.p_false);
  for (std::size_t i = 0; i < a.p_miss.size(); ++i) CHECK(b.p_miss[i] > a.p_miss[i]);
}

TEST_CASE("crossing requires separable classes") {
  auto m = two_class(0.5, 1.0, 0.09, 1.5);
  CHECK_THROWS_AS(crossing_point(m, 100.0, 0.3), NoCrossingError);
}

TEST_CASE("sampled rates agree with the closed forms") {
  const auto d = default_sensing_model();
  const double F = 200.0, tau = 0.3;
  const double eta = crossing_point(d, F, tau).eta;
  for (int cls : {2, 8}) {
    const auto r = sample_miss_rate(d, cls, F, tau, eta, 1'000'000, 5);
    CHECK(std::abs(r.empirical - r.closed_form) <= 0.005);
  }
  const auto fp = sample_false_positive_rate(d, F, tau, 0.2 * eta, 1'000'000, 6);
  CHECK(std::abs(fp.empirical - fp.closed_form) <= 0.005);
}

TEST_CASE("fit recovers generator parameters") {
  const auto d = default_sensing_model();
  const std::vector<double> rates = {150, 200, 300, 400};
  const auto traces = synth_fit_traces(d, rates, 40, 3);
  std::vector<FitGridPoint> grid;
  for (double F : rates)
    for (double tau : {0.3, 0.6}) grid.push_back({F, tau});
  FitOptions o;
  const FitResult r = fit_model_params(traces, grid, o);
  REQUIRE(r.params.num_classes() == 8);
  for (const auto& c : d.classes) {
    CHECK(std::abs(r.params.cls(c.class_id).lambda / c.lambda - 1.0) < 0.05);
    // Priors default to segment fractions.
    CHECK(r.params.cls(c.class_id).q > 0.0);
  }
  for (const auto& q : r.quality) {
    CHECK(q.nmse_power_mean < 0.1);
    CHECK(q.nmse_power_var < 0.1);
  }
  CHECK(r.cells.size() == grid.size() * 8);
  CHECK(std::abs(r.params.sigma_c_sq / d.sigma_c_sq - 1.0) < 0.1);
}

TEST_CASE("fit of silent traces gives zero levels") {
  const std::vector<double> rates = {150, 300};
  auto traces = synth_fit_traces(default_sensing_model(), rates, 35, 3);
  for (auto& t : traces)
    for (auto& v : t.subcarriers[0]) v = 0.0;
  std::vector<FitGridPoint> grid = {{150, 0.3}, {300, 0.3}};
  const FitResult r = fit_model_params(traces, grid, FitOptions{});
  for (const auto& c : r.params.classes) {
    CHECK(std::abs(c.lambda) < 1e-12);
    CHECK(std::abs(c.r) < 1e-9);
  }
  CHECK(std::abs(r.params.sigma_c_sq) < 1e-12);
}

TEST_CASE("fit reports short cells") {
  const auto d = default_sensing_model();
  const auto traces = synth_fit_traces(d, {150}, 2, 3);
  CHECK_THROWS_AS(fit_model_params(traces, {{150, 0.3}}, FitOptions{}), FitError);
  CHECK(nmse({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(nmse({0.0}, {0.0}) == 0.0);
  CHECK(nmse({2.0}, {1.0}) == doctest::Approx(0.25));
}
