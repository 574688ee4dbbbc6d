#include "iscc/stat/delta_sampler.hpp"

#include <cmath>

#include "iscc/errors.hpp"
#include "iscc/stat/delta_stats.hpp"

namespace iscc {

DeltaSampler::DeltaSampler(const SensingModelParams& model, double F, double tau)
    : model_(model), F_(F), tau_(tau), T_(model.window_len_s) {
  if (!(tau > 0.0) || tau > T_) throw InvalidArgument("time step must lie in (0, T^s]");
  for (int i = 1; i <= static_cast<int>(model.num_classes()); ++i) {
    const WindowPowerMoments w = window_power_moments(model, i, F);
    mu_.push_back(w.mean);
    sd_.push_back(std::sqrt(w.var));
    dev_sd_.push_back(std::sqrt(model.cls(i).sigma_d_sq));
  }
}

double DeltaSampler::power(int class_id, std::mt19937_64& rng) {
  const auto j = static_cast<std::size_t>(class_id - 1);
  return mu_[j] + sd_[j] * normal_(rng);
}

double DeltaSampler::static_draw(std::mt19937_64& rng) {
  const double entering = power(1, rng);
  const double leaving = power(1, rng);
  return tau_ / T_ * (entering - leaving) + dev_sd_[0] * normal_(rng);
}

double DeltaSampler::onset_draw_given(int class_id, double t, std::mt19937_64& rng) {
  if (class_id < 2 || class_id > static_cast<int>(mu_.size())) throw InvalidArgument("bad action class");
  const double action = power(class_id, rng);
  const double rest = power(1, rng);
  const double leaving = power(1, rng);
  return (t * action + (tau_ - t) * rest - tau_ * leaving) / T_ +
         dev_sd_[static_cast<std::size_t>(class_id - 1)] * normal_(rng);
}

double DeltaSampler::onset_draw_uniform(int class_id, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, tau_);
  const double t = u(rng);
  return onset_draw_given(class_id, t, rng);
}

double DeltaSampler::onset_draw_averaged(int class_id, std::mt19937_64& rng) {
  if (class_id < 2 || class_id > static_cast<int>(mu_.size())) throw InvalidArgument("bad action class");
  const auto j = static_cast<std::size_t>(class_id - 1);
  const double mean_t = 0.5 * tau_;
  const double rms_t = tau_ / std::sqrt(3.0);  // sqrt(E t²) = sqrt(E (tau-t)²)
  const double mean = mean_t / T_ * (mu_[j] - mu_[0]);
  return mean + rms_t / T_ * sd_[j] * normal_(rng) + rms_t / T_ * sd_[0] * normal_(rng) -
         tau_ / T_ * sd_[0] * normal_(rng) + dev_sd_[j] * normal_(rng);
}

RateEstimate sample_miss_rate(const SensingModelParams& model, int class_id, double F, double tau,
                              double eta, std::uint64_t draws, std::uint64_t seed, OnsetDraw mode) {
  DeltaSampler sampler(model, F, tau);
  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    const double dp = mode == OnsetDraw::averaged ? sampler.onset_draw_averaged(class_id, rng)
                                                  : sampler.onset_draw_uniform(class_id, rng);
    if (dp <= eta) ++hits;
  }
  RateEstimate r;
  r.closed_form = miss_rate(model, class_id, F, tau, eta);
  r.empirical = draws ? static_cast<double>(hits) / static_cast<double>(draws) : 0.0;
  r.draws = draws;
  return r;
}

RateEstimate sample_false_positive_rate(const SensingModelParams& model, double F, double tau,
                                        double eta, std::uint64_t draws, std::uint64_t seed) {
  DeltaSampler sampler(model, F, tau);
  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t d = 0; d < draws; ++d)
    if (sampler.static_draw(rng) > eta) ++hits;
  RateEstimate r;
  r.closed_form = false_positive_rate(model, F, tau, eta);
  r.empirical = draws ? static_cast<double>(hits) / static_cast<double>(draws) : 0.0;
  r.draws = draws;
  return r;
}

}  // namespace iscc
