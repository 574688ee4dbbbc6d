#include "iscc/perf/accuracy_surface.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "iscc/errors.hpp"

namespace iscc {

AccuracySurface::AccuracySurface() = default;

AccuracySurface AccuracySurface::parametric(const Parametric& p) {
  if (!(p.alpha_inf >= 0.0 && p.alpha_inf <= 1.0)) throw ValidationError("alpha_inf must lie in [0,1]");
  if (!(p.F0 > 0.0)) throw ValidationError("F0 must be positive");
  if (!(p.kappa >= 0.0)) throw ValidationError("kappa must be nonnegative");
  if (!(p.window_len_s > 0.0)) throw ValidationError("window length must be positive");
  AccuracySurface s;
  s.param_ = p;
  s.validate();
  return s;
}

AccuracySurface AccuracySurface::table(std::vector<double> Fs, std::vector<double> taus,
                                       std::vector<double> values) {
  if (Fs.size() < 2 || taus.size() < 2) throw ValidationError("accuracy table needs at least a 2x2 grid");
  if (values.size() != Fs.size() * taus.size()) throw ValidationError("accuracy table size mismatch");
  for (std::size_t i = 1; i < Fs.size(); ++i)
    if (!(Fs[i] > Fs[i - 1])) throw ValidationError("accuracy table F grid must increase");
  for (std::size_t j = 1; j < taus.size(); ++j)
    if (!(taus[j] > taus[j - 1])) throw ValidationError("accuracy table tau grid must increase");
  AccuracySurface s;
  s.is_table_ = true;
  s.Fs_ = std::move(Fs);
  s.taus_ = std::move(taus);
  s.values_ = std::move(values);
  s.validate();
  return s;
}

AccuracySurface AccuracySurface::load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("F,tau,alpha", 0) != 0) throw InvalidArgument("expected header 'F,tau,alpha' in " + path);
  std::map<std::pair<double, double>, double> cells;
  std::vector<double> Fs, taus;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    try {
      const double F = std::stod(a), tau = std::stod(b), al = std::stod(c);
      cells[{F, tau}] = al;
      Fs.push_back(F);
      taus.push_back(tau);
    } catch (const std::logic_error&) {
      throw InvalidArgument("malformed accuracy table row: " + line);
    }
  }
  std::sort(Fs.begin(), Fs.end());
  Fs.erase(std::unique(Fs.begin(), Fs.end()), Fs.end());
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  std::vector<double> values;
  for (double F : Fs)
    for (double tau : taus) {
      auto it = cells.find({F, tau});
      if (it == cells.end()) throw ValidationError("accuracy table is not a full grid");
      values.push_back(it->second);
    }
  AccuracySurface s = table(std::move(Fs), std::move(taus), std::move(values));
  s.source_ = path;
  return s;
}

bool AccuracySurface::contains(double F, double tau) const {
  if (!std::isfinite(F) || !std::isfinite(tau)) return false;
  if (!is_table_) return F > 0.0 && tau >= 0.0;
  return F >= Fs_.front() && F <= Fs_.back() && tau >= taus_.front() && tau <= taus_.back();
}

double AccuracySurface::operator()(double F, double tau) const {
  if (!contains(F, tau)) throw DomainError("accuracy surface undefined at this (F, tau)");
  if (!is_table_) {
    const auto& p = param_;
    return p.alpha_inf * (1.0 - std::exp(-F / p.F0)) * std::max(0.0, 1.0 - p.kappa * tau / p.window_len_s);
  }
  auto locate = [](const std::vector<double>& g, double v) {
    std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), v) - g.begin());
    i = std::clamp<std::size_t>(i, 1, g.size() - 1) - 1;
    const double t = (v - g[i]) / (g[i + 1] - g[i]);
    return std::pair<std::size_t, double>{i, std::clamp(t, 0.0, 1.0)};
  };
  const auto [i, u] = locate(Fs_, F);
  const auto [j, v] = locate(taus_, tau);
  const std::size_t nt = taus_.size();
  auto at = [&](std::size_t a, std::size_t b) { return values_[a * nt + b]; };
  return (1 - u) * (1 - v) * at(i, j) + u * (1 - v) * at(i + 1, j) + (1 - u) * v * at(i, j + 1) +
         u * v * at(i + 1, j + 1);
}

void AccuracySurface::validate() const {
  std::vector<double> Fs = Fs_, taus = taus_;
  if (!is_table_) {
    Fs.clear();
    taus.clear();
    for (int i = 1; i <= 1000; i += 7) Fs.push_back(i);
    for (int j = 0; j <= 40; ++j) taus.push_back(param_.window_len_s * j / 40.0);
  }
  for (std::size_t i = 0; i < Fs.size(); ++i)
    for (std::size_t j = 0; j < taus.size(); ++j) {
      const double a = (*this)(Fs[i], taus[j]);
      if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("accuracy outside [0,1]");
      if (i > 0 && a < (*this)(Fs[i - 1], taus[j]))
        throw ValidationError("accuracy must be nondecreasing in F");
      if (j > 0 && a > (*this)(Fs[i], taus[j - 1]))
        throw ValidationError("accuracy must be nonincreasing in tau");
    }
}

nlohmann::json AccuracySurface::to_json() const {
  if (is_table_) return {{"type", "table"}, {"path", source_}};
  return {{"type", "parametric"},
          {"alpha_inf", param_.alpha_inf},
          {"F0", param_.F0},
          {"kappa", param_.kappa},
          {"window_len_s", param_.window_len_s}};
}

AccuracySurface AccuracySurface::from_json(const nlohmann::json& j, const std::string& base_dir) {
  const std::string type = j.value("type", "parametric");
  if (type == "parametric") {
    Parametric p;
    p.alpha_inf = j.value("alpha_inf", p.alpha_inf);
    p.F0 = j.value("F0", p.F0);
    p.kappa = j.value("kappa", p.kappa);
    p.window_len_s = j.value("window_len_s", p.window_len_s);
    return parametric(p);
  }
  if (type == "table") {
    std::filesystem::path path = j.at("path").get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    AccuracySurface s = load_table_csv(path.string());
    s.source_ = j.at("path").get<std::string>();
    return s;
  }
  throw InvalidArgument("unknown accuracy surface type '" + type + "'");
}

}  // namespace iscc
