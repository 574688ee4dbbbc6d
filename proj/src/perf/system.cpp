#include "iscc/perf/system.hpp"

#include <cmath>
#include <string>

#include "iscc/errors.hpp"
#include "iscc/perf/units.hpp"

namespace iscc {

double SystemConfig::noise_sigma_sq() const {
  return units::dbm_to_watt(noise_dbm_hz) * B / static_cast<double>(N);
}

void SystemConfig::validate() const {
  std::string bad;
  auto need = [&](bool ok, const char* field) {
    if (!ok) bad += std::string(bad.empty() ? "" : ", ") + field;
  };
  need(B > 0.0, "B");
  need(N >= 1, "N");
  need(std::isfinite(noise_dbm_hz), "noise_dbm_hz");
  need(t_s > 0.0 && t_s < 1.0, "t_s");
  need(C_L > 0.0, "C_L");
  need(C_e > 0.0, "C_e");
  need(V_L > 0.0, "V_L");
  need(T_max > 0.0, "T_max_s");
  need(f_edge_total > 0.0, "f_edge");
  need(p_min > 0.0 && p_min < 0.5, "p_min");
  need(window_len_s > 0.0, "window_len_s");
  need(K >= 1, "K");
  if (!bad.empty()) throw ValidationError("invalid system fields: " + bad);
}

void DeviceProfile::validate() const {
  std::string bad;
  auto need = [&](bool ok, const char* field) {
    if (!ok) bad += std::string(bad.empty() ? "" : ", ") + field;
  };
  need(E_s > 0.0, "E_s");
  need(E_c > 0.0, "E_c");
  need(f_local > 0.0, "f_local");
  need(P_max > 0.0, "P_max");
  need(P_tx > 0.0, "P_tx");
  need(!gains.empty(), "gains");
  bool gains_ok = true;
  for (double g : gains) gains_ok = gains_ok && g >= 0.0 && std::isfinite(g);
  need(gains_ok, "gains");
  double qs = 0.0;
  bool q_ok = !priors.empty();
  for (double q : priors) {
    q_ok = q_ok && q >= 0.0 && q <= 1.0;
    qs += q;
  }
  need(q_ok && std::abs(qs - 1.0) <= 1e-9, "priors");
  if (!bad.empty()) throw ValidationError("device " + std::to_string(id) + " invalid fields: " + bad);
}

void to_json(nlohmann::json& j, const SystemConfig& s) {
  j = {{"B", s.B},
       {"N", s.N},
       {"noise_dbm_hz", s.noise_dbm_hz},
       {"t_s", s.t_s},
       {"C_L", s.C_L},
       {"C_e", s.C_e},
       {"V_L", s.V_L},
       {"T_max_s", s.T_max},
       {"f_edge", s.f_edge_total},
       {"p_min", s.p_min},
       {"window_len_s", s.window_len_s},
       {"K", s.K}};
}

void from_json(const nlohmann::json& j, SystemConfig& s) {
  using units::Kind;
  s = SystemConfig{};
  s.B = units::from_json(j.at("B"), Kind::frequency);
  s.N = j.at("N").get<int>();
  s.noise_dbm_hz = j.at("noise_dbm_hz").get<double>();
  s.t_s = j.at("t_s").get<double>();
  s.C_L = j.at("C_L").get<double>();
  s.C_e = j.at("C_e").get<double>();
  s.V_L = j.at("V_L").get<double>();
  s.T_max = j.at("T_max_s").get<double>();
  s.f_edge_total = units::from_json(j.at("f_edge"), Kind::frequency);
  s.p_min = j.at("p_min").get<double>();
  s.window_len_s = j.value("window_len_s", 1.5);
  s.K = j.value("K", 0);
}

void to_json(nlohmann::json& j, const DeviceProfile& d) {
  j = {{"id", d.id},           {"E_s", d.E_s},     {"E_c", d.E_c},
       {"f_local", d.f_local}, {"P_max", d.P_max}, {"P_tx", d.P_tx},
       {"gains", d.gains},     {"distance_m", d.distance_m}, {"priors", d.priors}};
}

void from_json(const nlohmann::json& j, DeviceProfile& d) {
  using units::Kind;
  d = DeviceProfile{};
  d.id = j.value("id", 0);
  d.E_s = j.at("E_s").get<double>();
  d.E_c = j.at("E_c").get<double>();
  d.f_local = units::from_json(j.at("f_local"), Kind::frequency);
  d.P_max = units::from_json(j.at("P_max"), Kind::power);
  d.P_tx = units::from_json(j.at("P_tx"), Kind::power);
  d.gains = j.at("gains").get<std::vector<double>>();
  d.distance_m = j.value("distance_m", 0.0);
  d.priors = j.at("priors").get<std::vector<double>>();
}

}  // namespace iscc
