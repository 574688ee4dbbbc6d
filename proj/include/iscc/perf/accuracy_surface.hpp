#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace iscc {

// Recognition accuracy α(F, τ), nondecreasing in F and nonincreasing in τ.
// Either parametric α_inf (1 - e^{-F/F0}) max(0, 1 - κ τ / T) or a table on an
// (F, τ) grid with bilinear interpolation inside the grid hull.
class AccuracySurface {
 public:
  struct Parametric {
    double alpha_inf = 0.95;
    double F0 = 25.0;
    double kappa = 0.15;
    double window_len_s = 1.5;
  };

  AccuracySurface();  // parametric defaults
  static AccuracySurface parametric(const Parametric& p);
  // values[i * taus.size() + j] = α(Fs[i], taus[j]). Grids strictly increasing.
  static AccuracySurface table(std::vector<double> Fs, std::vector<double> taus, std::vector<double> values);
  // CSV `F,tau,alpha` covering a full rectangular grid.
  static AccuracySurface load_table_csv(const std::string& path);

  // Throws DomainError outside the surface domain.
  double operator()(double F, double tau) const;
  bool contains(double F, double tau) const;

  bool is_table() const { return is_table_; }
  const Parametric& params() const { return param_; }
  const std::string& source_path() const { return source_; }

  // Range and monotonicity check on a grid; throws ValidationError.
  void validate() const;

  nlohmann::json to_json() const;
  // {"type":"parametric",...} or {"type":"table","path":...}; relative table
  // paths resolve against base_dir.
  static AccuracySurface from_json(const nlohmann::json& j, const std::string& base_dir = "");

 private:
  bool is_table_ = false;
  Parametric param_;
  std::vector<double> Fs_, taus_, values_;
  std::string source_;
};

}  // namespace iscc
