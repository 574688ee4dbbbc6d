#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "iscc/perf/accuracy_surface.hpp"
#include "iscc/perf/system.hpp"
#include "iscc/stat/sensing_model.hpp"

namespace iscc {

struct Scenario {
  SystemConfig sys;
  std::vector<DeviceProfile> devices;
  SensingModelParams model;
  std::shared_ptr<const AccuracySurface> surface;
  std::uint64_t seed = 0;

  // Throws ValidationError listing the offending fields.
  void validate() const;
};

// Generator inputs. Defaults are this project's calibrated configuration;
// calibration choices are listed in the README.
struct ScenarioParams {
  int K = 12;
  double radius_m = 500.0;
  double min_distance_m = 10.0;
  double p_tx_dbm = 24.0;
  double p_max_lo_dbm = 26.0;
  double p_max_hi_dbm = 29.0;
  double f_local_lo = 35e6;
  double f_local_hi = 50e6;
  double E_s = 2e-3;
  double E_c = 5e-4;
  double q_static = 0.4;
  int action_classes = 7;
  SystemConfig sys;
  SensingModelParams model;  // empty classes: default_sensing_model()
  AccuracySurface::Parametric surface;
};

// σc² = 0.09; static (λ, r) = (1, 3); seven action classes of increasing
// power; σd² = 2.6e-4; priors 0.4 / (0.6/7).
SensingModelParams default_sensing_model(double q_static = 0.4, double window_len_s = 1.5);

// 128.1 + 37.6 log10(d_km) dB.
double path_loss_db(double distance_km);

Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed);

// Replaces every device's priors with q_static and equal action shares, and
// the model's priors to match.
void set_static_prior(Scenario& s, double q_static);

// K <= pool size takes the first K devices; otherwise appends seeded draws
// from the pool.
Scenario resample_devices(const Scenario& base, int K, std::uint64_t seed);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir = "");
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace iscc
