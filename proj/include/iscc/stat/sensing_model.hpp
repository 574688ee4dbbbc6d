#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace iscc {

// Statistical fingerprint of one phase class. class_id 1 is static.
struct ActionClassParams {
  int class_id = 1;
  double lambda = 0.0;      // in-band power level
  double r = 0.0;           // power x samples
  double sigma_d_sq = 0.0;  // instance-to-instance deviation of ΔP
  double q = 0.0;           // prior probability
};

struct SensingModelParams {
  std::vector<ActionClassParams> classes;  // classes[j].class_id == j + 1
  double sigma_c_sq = 0.0;
  double window_len_s = 1.5;
  double band_lo_hz = 10.0;
  double band_hi_hz = 60.0;

  // Throws InvalidArgument when an invariant fails.
  void validate() const;
  // Same checks minus sigma_c_sq > 0 (fitted zero traces).
  void validate_structure() const;

  std::size_t num_classes() const { return classes.size(); }
  const ActionClassParams& cls(int class_id) const;
};

struct WindowPowerMoments {
  double mean = 0.0;
  double var = 0.0;
};

// mean = λ + r/(T F), var = 4σc²λ/(T F) + 2σc² r/(T F)².
WindowPowerMoments window_power_moments(const SensingModelParams& model, int class_id, double F);

void to_json(nlohmann::json& j, const SensingModelParams& m);
void from_json(const nlohmann::json& j, SensingModelParams& m);

SensingModelParams load_sensing_model(const std::string& path);
void save_sensing_model(const SensingModelParams& m, const std::string& path);

}  // namespace iscc
