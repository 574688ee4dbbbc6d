#include "iscc/exp/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "iscc/errors.hpp"
#include "iscc/perf/units.hpp"

namespace iscc {

void Scenario::validate() const {
  std::string bad;
  auto note = [&](const std::string& what) { bad += (bad.empty() ? "" : "; ") + what; };
  auto guard = [&](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      note(e.what());
    }
  };
  guard([&] { sys.validate(); });
  guard([&] { model.validate(); });
  if (static_cast<int>(devices.size()) != sys.K) note("device count does not match K");
  if (!surface) note("no accuracy surface");
  if (std::abs(model.window_len_s - sys.window_len_s) > 1e-12)
    note("sensing model window length differs from system window length");
  for (const auto& d : devices) {
    guard([&] { d.validate(); });
    if (d.priors.size() != model.num_classes())
      note("device " + std::to_string(d.id) + " prior count differs from class count");
  }
  if (!bad.empty()) throw ValidationError(bad);
}

SensingModelParams default_sensing_model(double q_static, double window_len_s) {
  SensingModelParams m;
  m.sigma_c_sq = 0.09;
  m.window_len_s = window_len_s;
  m.band_lo_hz = 10.0;
  m.band_hi_hz = 60.0;
  const double levels[8][2] = {{1.0, 3.0}, {2.0, 4.0}, {2.5, 5.0}, {3.0, 5.0},
                               {3.5, 6.0}, {4.0, 6.0}, {5.0, 7.0}, {6.0, 7.0}};
  for (int i = 0; i < 8; ++i) {
    ActionClassParams c;
    c.class_id = i + 1;
    c.lambda = levels[i][0];
    c.r = levels[i][1];
    c.sigma_d_sq = 2.6e-4;
    c.q = i == 0 ? q_static : (1.0 - q_static) / 7.0;
    m.classes.push_back(c);
  }
  return m;
}

double path_loss_db(double distance_km) { return 128.1 + 37.6 * std::log10(distance_km); }

Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed) {
  std::string bad;
  auto need = [&](bool ok, const char* what) {
    if (!ok) bad += std::string(bad.empty() ? "" : ", ") + what;
  };
  need(params.K >= 1, "K");
  need(params.radius_m > 0.0, "radius_m");
  need(params.min_distance_m > 0.0 && params.min_distance_m < params.radius_m, "min_distance_m");
  need(params.p_max_lo_dbm <= params.p_max_hi_dbm, "P_max range");
  need(params.f_local_lo > 0.0 && params.f_local_lo <= params.f_local_hi, "f_local range");
  need(params.q_static >= 0.0 && params.q_static <= 1.0, "q_static");
  need(params.action_classes >= 1, "action_classes");
  if (!bad.empty()) throw ValidationError("invalid scenario parameters: " + bad);

  Scenario s;
  s.seed = seed;
  s.sys = params.sys;
  s.sys.K = params.K;
  s.model = params.model.classes.empty() ? default_sensing_model(params.q_static, s.sys.window_len_s)
                                         : params.model;
  auto surf = params.surface;
  surf.window_len_s = s.sys.window_len_s;
  s.surface = std::make_shared<const AccuracySurface>(AccuracySurface::parametric(surf));

  const int M = static_cast<int>(s.model.num_classes());
  std::vector<double> priors(static_cast<std::size_t>(M), (1.0 - params.q_static) / (M - 1));
  priors[0] = params.q_static;
  if (params.model.classes.empty()) {
    for (int i = 0; i < M; ++i) s.model.classes[static_cast<std::size_t>(i)].q = priors[static_cast<std::size_t>(i)];
  } else {
    for (int i = 0; i < M; ++i) priors[static_cast<std::size_t>(i)] = s.model.classes[static_cast<std::size_t>(i)].q;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> fade(1.0);
  const double r0 = params.min_distance_m / params.radius_m;
  for (int k = 0; k < params.K; ++k) {
    DeviceProfile d;
    d.id = k;
    // Uniform over the annulus [min_distance, radius].
    const double u = unit(rng);
    d.distance_m = params.radius_m * std::sqrt(r0 * r0 + (1.0 - r0 * r0) * u);
    const double pl = units::db_to_linear(-path_loss_db(d.distance_m / 1000.0));
    for (int n = 0; n < s.sys.N; ++n) d.gains.push_back(pl * fade(rng));
    d.P_max = units::dbm_to_watt(params.p_max_lo_dbm + (params.p_max_hi_dbm - params.p_max_lo_dbm) * unit(rng));
    d.f_local = params.f_local_lo + (params.f_local_hi - params.f_local_lo) * unit(rng);
    d.P_tx = units::dbm_to_watt(params.p_tx_dbm);
    d.E_s = params.E_s;
    d.E_c = params.E_c;
    d.priors = priors;
    d.surface = s.surface;
    s.devices.push_back(d);
  }
  s.validate();
  return s;
}

void set_static_prior(Scenario& s, double q_static) {
  if (!(q_static > 0.0 && q_static < 1.0)) throw InvalidArgument("static prior must lie in (0, 1)");
  const std::size_t M = s.model.num_classes();
  for (std::size_t i = 0; i < M; ++i)
    s.model.classes[i].q = i == 0 ? q_static : (1.0 - q_static) / static_cast<double>(M - 1);
  for (auto& d : s.devices) {
    d.priors.assign(M, (1.0 - q_static) / static_cast<double>(M - 1));
    d.priors[0] = q_static;
  }
}

Scenario resample_devices(const Scenario& base, int K, std::uint64_t seed) {
  if (K < 1) throw InvalidArgument("device count must be >= 1");
  Scenario s = base;
  s.devices.clear();
  const int pool = static_cast<int>(base.devices.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, pool - 1);
  for (int k = 0; k < K; ++k) {
    DeviceProfile d = k < pool ? base.devices[static_cast<std::size_t>(k)]
                               : base.devices[static_cast<std::size_t>(pick(rng))];
    d.id = k;
    s.devices.push_back(d);
  }
  s.sys.K = K;
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["seed"] = s.seed;
  j["system"] = s.sys;
  j["sensing_model"] = s.model;
  j["accuracy_surface"] = s.surface ? s.surface->to_json() : nlohmann::json();
  auto devs = nlohmann::json::array();
  for (const auto& d : s.devices) devs.push_back(d);
  j["devices"] = devs;
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir) {
  Scenario s;
  s.seed = j.value("seed", std::uint64_t{0});
  s.sys = j.at("system").get<SystemConfig>();
  s.model = j.at("sensing_model").get<SensingModelParams>();
  s.surface = std::make_shared<const AccuracySurface>(
      AccuracySurface::from_json(j.value("accuracy_surface", nlohmann::json::object()), base_dir));
  for (const auto& dj : j.at("devices")) {
    DeviceProfile d = dj.get<DeviceProfile>();
    d.surface = s.surface;
    s.devices.push_back(d);
  }
  if (s.sys.K == 0) s.sys.K = static_cast<int>(s.devices.size());
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  try {
    return scenario_from_json(j, std::filesystem::path(path).parent_path().string());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << scenario_to_json(s).dump(2) << "\n";
}

}  // namespace iscc
