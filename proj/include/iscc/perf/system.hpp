#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "iscc/perf/accuracy_surface.hpp"

namespace iscc {

struct SystemConfig {
  double B = 4e6;                // Hz per resource block
  int N = 10;                    // subcarriers per block
  double noise_dbm_hz = -174.0;  // noise spectral density
  double t_s = 1e-3;             // s per sensing transmission
  double C_L = 40.0;             // cycles/element, local FFT
  double C_e = 3e6;              // cycles/element, edge recognition
  double V_L = 64.0;             // bits/element
  double T_max = 0.55;           // s
  double f_edge_total = 42e9;    // cycles/s
  double p_min = 0.02;
  double window_len_s = 1.5;     // T^s
  int K = 12;

  // Per-subcarrier noise power N0 B / N in W.
  double noise_sigma_sq() const;
  void validate() const;
};

struct DeviceProfile {
  int id = 0;
  double E_s = 2e-3;     // J per sensing transmission
  double E_c = 5e-4;     // J per element
  double f_local = 40e6; // cycles/s
  double P_max = 0.5;    // W
  double P_tx = 0.25;    // W
  std::vector<double> gains;  // |H_n|², linear
  double distance_m = 0.0;
  std::vector<double> priors;  // q_{k,1..M}
  std::shared_ptr<const AccuracySurface> surface;

  double q_static() const { return priors.at(0); }
  void validate() const;
};

void to_json(nlohmann::json& j, const SystemConfig& s);
void from_json(const nlohmann::json& j, SystemConfig& s);
// Surfaces are attached separately.
void to_json(nlohmann::json& j, const DeviceProfile& d);
void from_json(const nlohmann::json& j, DeviceProfile& d);

}  // namespace iscc
