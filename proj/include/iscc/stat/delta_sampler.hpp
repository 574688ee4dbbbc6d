#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "iscc/stat/sensing_model.hpp"

namespace iscc {

// Draws ΔP from the two-window construction: consecutive windows share their
// overlap, so ΔP is the scaled difference of the entering and leaving step
// powers, each a normal window power of the class occupying it.
class DeltaSampler {
 public:
  DeltaSampler(const SensingModelParams& model, double F, double tau);

  // Both steps static.
  double static_draw(std::mt19937_64& rng);

  // Action class i occupies the last t seconds of the entering step.
  double onset_draw_given(int class_id, double t, std::mt19937_64& rng);

  // t ~ Uniform[0, tau]; the resulting ΔP is a mixture over t.
  double onset_draw_uniform(int class_id, std::mt19937_64& rng);

  // Onset-averaged draw: step weights carry the first and second moments of
  // the uniform offset (E t = tau/2, E t² = E (tau-t)² = tau²/3), which gives
  // a normal ΔP with exactly the averaged mean and variance.
  double onset_draw_averaged(int class_id, std::mt19937_64& rng);

 private:
  double power(int class_id, std::mt19937_64& rng);

  SensingModelParams model_;
  double F_;
  double tau_;
  double T_;
  std::vector<double> mu_;
  std::vector<double> sd_;
  std::vector<double> dev_sd_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct RateEstimate {
  double closed_form = 0.0;
  double empirical = 0.0;
  std::uint64_t draws = 0;
};

enum class OnsetDraw { averaged, uniform };

// Fraction of onset draws with ΔP <= eta.
RateEstimate sample_miss_rate(const SensingModelParams& model, int class_id, double F, double tau,
                              double eta, std::uint64_t draws, std::uint64_t seed,
                              OnsetDraw mode = OnsetDraw::averaged);

// Fraction of static draws with ΔP > eta.
RateEstimate sample_false_positive_rate(const SensingModelParams& model, double F, double tau,
                                        double eta, std::uint64_t draws, std::uint64_t seed);

}  // namespace iscc
