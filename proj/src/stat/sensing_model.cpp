#include "iscc/stat/sensing_model.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "iscc/errors.hpp"

namespace iscc {

void SensingModelParams::validate_structure() const {
  if (classes.empty()) throw InvalidArgument("sensing model has no classes");
  double qsum = 0.0;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    const auto& c = classes[j];
    const std::string tag = "class " + std::to_string(j + 1);
    if (c.class_id != static_cast<int>(j) + 1) throw InvalidArgument(tag + ": ids must run 1..M in order");
    if (!(c.lambda >= 0.0)) throw InvalidArgument(tag + ": lambda must be >= 0");
    if (!(c.r >= 0.0)) throw InvalidArgument(tag + ": r must be >= 0");
    if (!(c.sigma_d_sq >= 0.0)) throw InvalidArgument(tag + ": sigma_d_sq must be >= 0");
    if (!(c.q >= 0.0 && c.q <= 1.0)) throw InvalidArgument(tag + ": prior outside [0,1]");
    qsum += c.q;
  }
  if (std::abs(qsum - 1.0) > 1e-9) throw InvalidArgument("class priors must sum to 1");
  if (!(window_len_s > 0.0)) throw InvalidArgument("window length must be positive");
  if (!(band_lo_hz >= 0.0 && band_lo_hz < band_hi_hz)) throw InvalidArgument("band must satisfy 0 <= lo < hi");
}

void SensingModelParams::validate() const {
  validate_structure();
  if (!(sigma_c_sq > 0.0)) throw InvalidArgument("sigma_c_sq must be positive");
}

const ActionClassParams& SensingModelParams::cls(int class_id) const {
  if (class_id < 1 || class_id > static_cast<int>(classes.size()))
    throw InvalidArgument("unknown class id " + std::to_string(class_id));
  return classes[static_cast<std::size_t>(class_id - 1)];
}

WindowPowerMoments window_power_moments(const SensingModelParams& model, int class_id, double F) {
  if (!(F >= 1.0)) throw InvalidArgument("sampling rate must be >= 1");
  const auto& c = model.cls(class_id);
  const double n = model.window_len_s * F;
  return {c.lambda + c.r / n,
          4.0 * model.sigma_c_sq * c.lambda / n + 2.0 * model.sigma_c_sq * c.r / (n * n)};
}

void to_json(nlohmann::json& j, const SensingModelParams& m) {
  j = nlohmann::json::object();
  j["sigma_c_sq"] = m.sigma_c_sq;
  j["window_len_s"] = m.window_len_s;
  j["band"] = {m.band_lo_hz, m.band_hi_hz};
  auto arr = nlohmann::json::array();
  for (const auto& c : m.classes)
    arr.push_back({{"class_id", c.class_id}, {"lambda", c.lambda}, {"r", c.r},
                   {"sigma_d_sq", c.sigma_d_sq}, {"q", c.q}});
  j["classes"] = arr;
}

void from_json(const nlohmann::json& j, SensingModelParams& m) {
  m = SensingModelParams{};
  m.sigma_c_sq = j.at("sigma_c_sq").get<double>();
  m.window_len_s = j.value("window_len_s", 1.5);
  if (j.contains("band")) {
    m.band_lo_hz = j.at("band").at(0).get<double>();
    m.band_hi_hz = j.at("band").at(1).get<double>();
  }
  int next_id = 1;
  for (const auto& c : j.at("classes")) {
    ActionClassParams p;
    p.class_id = c.value("class_id", next_id);
    p.lambda = c.at("lambda").get<double>();
    p.r = c.at("r").get<double>();
    p.sigma_d_sq = c.value("sigma_d_sq", 0.0);
    p.q = c.at("q").get<double>();
    m.classes.push_back(p);
    ++next_id;
  }
}

SensingModelParams load_sensing_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  SensingModelParams m = nlohmann::json::parse(in).get<SensingModelParams>();
  m.validate_structure();
  return m;
}

void save_sensing_model(const SensingModelParams& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << nlohmann::json(m).dump(2) << "\n";
}

}  // namespace iscc
