#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>

#include "iscc/errors.hpp"
#include "iscc/perf/accuracy_surface.hpp"
#include "iscc/perf/perf_model.hpp"
#include "iscc/perf/system.hpp"
#include "iscc/perf/units.hpp"

using namespace iscc;

namespace {

// Ten subcarriers at unit SNR and B = 1 MHz: R = 1e6 bit/s.
SystemConfig unit_rate_system() {
  SystemConfig s;
  s.B = 1e6;
  s.N = 10;
  s.t_s = 1e-12;
  return s;
}

DeviceProfile unit_rate_device(const SystemConfig& s, double q_static = 0.4) {
  DeviceProfile d;
  d.P_tx = 0.2;
  d.gains.assign(10, double(s.N) * s.noise_sigma_sq() / d.P_tx);
  d.priors = {q_static};
  for (int i = 0; i < 7; ++i) d.priors.push_back((1.0 - q_static) / 7.0);
  d.surface = std::make_shared<AccuracySurface>();
  return d;
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(units::dbm_to_watt(30.0) == doctest::Approx(1.0));
  CHECK(units::dbm_to_watt(24.0) == doctest::Approx(0.251188643));
  CHECK(units::watt_to_dbm(units::dbm_to_watt(-174.0)) == doctest::Approx(-174.0));
  CHECK(units::db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(units::parse("42GHz", units::Kind::frequency) == doctest::Approx(42e9));
  CHECK(units::parse("35 MHz", units::Kind::frequency) == doctest::Approx(35e6));
  CHECK(units::parse("26dBm", units::Kind::power) == doctest::Approx(units::dbm_to_watt(26.0)));
  CHECK(units::parse("0.5W", units::Kind::power) == 0.5);
  CHECK(units::parse("7", units::Kind::scalar) == 7.0);
  CHECK_THROWS_AS(units::parse("3 parsecs", units::Kind::frequency), InvalidArgument);
  CHECK_THROWS_AS(units::parse("GHz", units::Kind::frequency), InvalidArgument);
  CHECK(units::from_json(nlohmann::json("24 dBm"), units::Kind::power) == doctest::Approx(0.251188643));
}

TEST_CASE("data rate") {
  SystemConfig s = unit_rate_system();
  s.B = 1e7;  // B/N = 1e6
  DeviceProfile d = unit_rate_device(s);
  d.gains = {d.gains[0]};
  CHECK(data_rate(d, s) == doctest::Approx(1e6).epsilon(1e-12));

  // High SNR: doubling gains adds (B/N) bits per subcarrier.
  d.gains.assign(10, 1e6 * d.gains[0]);
  const double r1 = data_rate(d, s);
  for (auto& g : d.gains) g *= 2.0;
  CHECK((data_rate(d, s) - r1) == doctest::Approx(1e6 * 10).epsilon(0.01));

  // Direct re-evaluation with the noise computed from the dBm density.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemConfig def;
  DeviceProfile dev;
  for (int n = 0; n < def.N; ++n) dev.gains.push_back(1e-13 * u(rng));
  const double sigma = std::pow(10.0, (-174.0 - 30.0) / 10.0) * def.B / def.N;
  double bits = 0.0;
  for (double g : dev.gains) bits += std::log2(1.0 + g * dev.P_tx / (def.N * sigma));
  CHECK(data_rate(dev, def) == doctest::Approx(def.B / def.N * bits).epsilon(1e-9));
  CHECK(data_rate(dev, def) > 0.0);
}

TEST_CASE("power components") {
  SystemConfig s;
  s.window_len_s = 1.5;
  DeviceProfile d = unit_rate_device(s);
  d.E_c = 1e-7;
  d.E_s = 1e-3;
  const auto p = power_overall(d, s, 200.0, 0.5);
  CHECK(p.compute == doctest::Approx(6e-5).epsilon(1e-12));
  CHECK(power_overall(d, s, 1.0, 0.5).sensing == doctest::Approx(1e-3));
  CHECK(p.transmit == doctest::Approx((1.0 - 0.2) * d.P_tx * 0.6));
  CHECK(p.overall == doctest::Approx(p.sensing + p.compute + p.transmit));
  d.priors = {1.0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(power_overall(d, s, 200.0, 0.5).transmit == 0.0);
  CHECK_THROWS_AS(power_overall(d, s, 1000.0, 0.5), InfeasibleError);
}

TEST_CASE("power trends") {
  SystemConfig s;
  DeviceProfile d = unit_rate_device(s);
  d.P_tx = 0.001;  // small enough that sensing growth dominates
  for (double tau : {0.2, 0.8}) {
    double prev = -1.0;
    for (double F = 1; F < 999; F += 7) {
      const double p = power_overall(d, s, F, tau).overall;
      CHECK(p > prev);
      prev = p;
    }
  }
  double prev = 1e300;
  for (double tau = 0.05; tau <= 1.5; tau += 0.05) {
    const double c = power_overall(d, s, 100.0, tau).compute;
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("delay components") {
  SystemConfig s = unit_rate_system();
  DeviceProfile d = unit_rate_device(s);
  const auto t = delay_components(d, s, 100.0, 1e9);
  CHECK(t.transmit == doctest::Approx(0.0576).epsilon(1e-9));
  CHECK(t.compute == doctest::Approx(1.5 * 100.0 * 40.0 / d.f_local));
  CHECK(t.recognition == doctest::Approx(10 * 150 * 3e6 * 0.6 / 1e9));
  const auto t2 = delay_components(d, s, 100.0, 2e9);
  CHECK(t2.recognition == doctest::Approx(t.recognition / 2.0).epsilon(1e-15));

  d.priors = {1.0, 0, 0, 0, 0, 0, 0, 0};
  const auto z = delay_components(d, s, 100.0, 1e9);
  CHECK(z.transmit == 0.0);
  CHECK(z.recognition == 0.0);

  SystemConfig def;
  DeviceProfile e = unit_rate_device(def);
  DelayBreakdown prev{-1, -1, -1};
  for (double F = 1; F < 999; F += 11) {
    const auto c = delay_components(e, def, F, 3e9);
    CHECK(c.compute > prev.compute);
    CHECK(c.transmit > prev.transmit);
    CHECK(c.recognition > prev.recognition);
    prev = c;
  }
}

TEST_CASE("device accuracy") {
  SystemConfig s;
  DeviceProfile d = unit_rate_device(s, 0.4);
  d.surface = std::make_shared<AccuracySurface>(AccuracySurface::table({1, 1000}, {0.01, 1.5}, {0.9, 0.9, 0.9, 0.9}));
  CHECK(device_accuracy(d, 100.0, 0.3) == doctest::Approx(0.94));
  d.surface = std::make_shared<AccuracySurface>(AccuracySurface::table({1, 1000}, {0.01, 1.5}, {1, 1, 1, 1}));
  CHECK(device_accuracy(d, 100.0, 0.3) == doctest::Approx(1.0));
  d.surface = std::make_shared<AccuracySurface>(AccuracySurface::table({1, 1000}, {0.01, 1.5}, {0, 0, 0, 0}));
  CHECK(device_accuracy(d, 100.0, 0.3) == doctest::Approx(0.4));

  d.surface = std::make_shared<AccuracySurface>();
  for (double tau : {0.1, 1.0}) {
    double prev = 0.0;
    for (double F = 1; F <= 500; F += 3) {
      const double a = device_accuracy(d, F, tau);
      CHECK(a >= prev);
      prev = a;
    }
  }
  double prev = 1.0;
  for (double tau = 0.05; tau <= 1.5; tau += 0.05) {
    const double a = device_accuracy(d, 60.0, tau);
    CHECK(a <= prev);
    prev = a;
  }
}

TEST_CASE("accuracy surface: parametric, table and csv") {
  const AccuracySurface p;
  CHECK(p(25.0, 0.0) == doctest::Approx(0.95 * (1.0 - std::exp(-1.0))));
  CHECK(p(1e4, 1.5) == doctest::Approx(0.95 * 0.85));
  CHECK_NOTHROW(p.validate());

  const auto t = AccuracySurface::table({10, 20}, {0.1, 0.5}, {0.5, 0.4, 0.7, 0.6});
  CHECK(t(15.0, 0.3) == doctest::Approx(0.55));
  CHECK(t.contains(10.0, 0.1));
  CHECK_FALSE(t.contains(30.0, 0.1));
  CHECK_THROWS_AS(t(30.0, 0.1), DomainError);
  CHECK_THROWS(AccuracySurface::table({10, 20}, {0.1, 0.5}, {0.5, 0.6, 0.4, 0.6}).validate());

  const auto path = std::filesystem::temp_directory_path() / "iscc_surface_test.csv";
  {
    std::ofstream f(path);
    f << "F,tau,alpha\n10,0.1,0.5\n10,0.5,0.4\n20,0.1,0.7\n20,0.5,0.6\n";
  }
  const auto l = AccuracySurface::load_table_csv(path.string());
  CHECK(l(15.0, 0.3) == doctest::Approx(0.55));
  const auto j = l.to_json();
  CHECK(j["type"] == "table");
  const auto back = AccuracySurface::from_json(AccuracySurface().to_json());
  CHECK(back(40.0, 0.3) == doctest::Approx(p(40.0, 0.3)));
  std::filesystem::remove(path);
}

TEST_CASE("system config json and validation") {
  SystemConfig s;
  nlohmann::json j = s;
  CHECK(j["T_max_s"] == 0.55);
  j["f_edge"] = "30 GHz";
  j["noise_dbm_hz"] = -170.0;
  const auto back = j.get<SystemConfig>();
  CHECK(back.f_edge_total == doctest::Approx(30e9));
  CHECK(back.noise_dbm_hz == -170.0);
  s.B = -1;
  s.p_min = 0.7;
  try {
    s.validate();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("B") != std::string::npos);
    CHECK(msg.find("p_min") != std::string::npos);
  }
  DeviceProfile d;
  CHECK_THROWS_AS(d.validate(), ValidationError);
}
