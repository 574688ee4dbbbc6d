#include "iscc/signal/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "iscc/errors.hpp"
#include "iscc/signal/fft.hpp"
#include "iscc/signal/spectral.hpp"

namespace iscc {

namespace {

constexpr std::size_t kQuadPerBin = 16;  // fine frequency points per window bin

// Real Dirichlet kernel sin(pi d)/sin(pi d/n); the linear phase term cancels
// in every modulus we need.
double dirichlet(double d, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double s = std::sin(std::numbers::pi * d / nn);
  if (std::abs(s) < 1e-12) {
    // d is a multiple of n: limit is +-n.
    const long k = std::lround(d / nn);
    return (k * static_cast<long>(n - 1)) % 2 == 0 ? nn : -nn;
  }
  return std::sin(std::numbers::pi * d) / s;
}

// Fraction of the fine cell centred at nu (width 1/m) covered by [a, b].
double cell_weight(double nu, double a, double b, std::size_t m) {
  const double h = 0.5 / static_cast<double>(m);
  const double lo = std::max(nu - h, a);
  const double hi = std::min(nu + h, b);
  return std::max(0.0, hi - lo) * static_cast<double>(m);
}

struct UnitCovariance {
  double trace = 0.0;
  double frob_sq = 0.0;
  double tone_diag = 0.0;
};

// Band-restricted covariance of the windowed DFT for a unit-level block
// [a, b] (window bins), sampled on a grid of m points per bin.
UnitCovariance unit_covariance(double a, double b, std::size_t n, std::size_t lo, std::size_t hi,
                               std::size_t tone_bin, std::size_t m) {
  std::vector<double> nus, ws;
  const long k0 = static_cast<long>(std::floor(a * static_cast<double>(m))) - 1;
  const long k1 = static_cast<long>(std::ceil(b * static_cast<double>(m))) + 1;
  for (long k = k0; k <= k1; ++k) {
    const double nu = static_cast<double>(k) / static_cast<double>(m);
    const double w = cell_weight(nu, a, b, m);
    if (w > 0.0) {
      nus.push_back(nu);
      ws.push_back(w);
    }
  }
  const std::size_t nb = hi - lo + 1;
  const std::size_t nk = nus.size();
  std::vector<double> amat(nb * nk);
  for (std::size_t f = 0; f < nb; ++f)
    for (std::size_t k = 0; k < nk; ++k)
      amat[f * nk + k] = dirichlet(nus[k] - static_cast<double>(lo + f), n) * std::sqrt(ws[k]);

  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(m));
  UnitCovariance out;
  for (std::size_t f = 0; f < nb; ++f) {
    for (std::size_t g = f; g < nb; ++g) {
      double s = 0.0;
      const double* pa = &amat[f * nk];
      const double* pb = &amat[g * nk];
      for (std::size_t k = 0; k < nk; ++k) s += pa[k] * pb[k];
      s *= norm;
      if (f == g) {
        out.trace += s;
        out.frob_sq += s * s;
        if (lo + f == tone_bin) out.tone_diag = s;
      } else {
        out.frob_sq += 2.0 * s * s;
      }
    }
  }
  return out;
}

}  // namespace

CsiGenerator::CsiGenerator(const SensingModelParams& model, double sample_rate, double dc_level)
    : model_(model), rate_(sample_rate), dc_(dc_level) {
  model_.validate();
  WindowSpec spec{model.window_len_s, model.window_len_s, model.band_lo_hz, model.band_hi_hz};
  const SampleGrid grid = quantize(spec, sample_rate);
  n_ = grid.window;
  const BandBins bins = band_bins(spec, sample_rate, n_);
  band_lo_ = bins.lo;
  band_hi_ = bins.hi;

  const double nd = static_cast<double>(n_);
  const double n_model = model.window_len_s * sample_rate;
  const double centre = 0.5 * static_cast<double>(band_lo_ + band_hi_);
  const double max_width = static_cast<double>(band_hi_ - band_lo_) - 2.0;
  const double sc2 = model.sigma_c_sq;

  for (const auto& c : model.classes) {
    ClassShape sh;
    sh.tone_bin = static_cast<std::size_t>(std::lround(centre));
    sh.tone_amplitude = std::sqrt(c.lambda);
    const WindowPowerMoments target = window_power_moments(model, c.class_id, sample_rate);
    sh.target_mean = target.mean;
    sh.target_var = target.var;
    sh.predicted_mean = c.lambda;
    if (c.r <= 0.0) {
      shapes_.push_back(sh);
      continue;
    }
    const double w0 = c.r / (2.0 * sc2);
    if (w0 > max_width)
      throw InvalidArgument("class " + std::to_string(c.class_id) +
                            ": r / (2 sigma_c^2) exceeds the band width in bins");
    // Noise must contribute r/(T F) to the mean: trace(C) = r n / (T F).
    const double trace_target = c.r * nd / n_model;

    auto evaluate = [&](double width, double& level, double& var) {
      const double a = centre - 0.5 * width;
      const double b = centre + 0.5 * width;
      const UnitCovariance u = unit_covariance(a, b, n_, band_lo_, band_hi_, sh.tone_bin, kQuadPerBin);
      level = trace_target / u.trace;
      var = (level * level * u.frob_sq + 2.0 * nd * c.lambda * level * u.tone_diag) / (nd * nd);
    };

    double lo_w = std::max(0.25 * w0, 1.0 / static_cast<double>(kQuadPerBin));
    double hi_w = std::min(4.0 * w0, max_width);
    double level = 0.0, var = 0.0;
    double width = w0;
    double level_lo, var_lo, level_hi, var_hi;
    evaluate(lo_w, level_lo, var_lo);
    evaluate(hi_w, level_hi, var_hi);
    if (var_lo <= target.var) {
      width = lo_w;
    } else if (var_hi >= target.var) {
      width = hi_w;
    } else {
      // Variance falls monotonically as the same power spreads wider.
      for (int it = 0; it < 40; ++it) {
        width = 0.5 * (lo_w + hi_w);
        evaluate(width, level, var);
        if (var > target.var)
          lo_w = width;
        else
          hi_w = width;
      }
      width = 0.5 * (lo_w + hi_w);
    }
    evaluate(width, level, var);
    sh.level = level;
    sh.lo_bin = centre - 0.5 * width;
    sh.hi_bin = centre + 0.5 * width;
    sh.predicted_mean = c.lambda + trace_target / nd;
    sh.predicted_var = var;
    shapes_.push_back(sh);
  }
}

const CsiGenerator::ClassShape& CsiGenerator::shape(int class_id) const {
  if (class_id < 1 || class_id > static_cast<int>(shapes_.size()))
    throw InvalidArgument("unknown class id " + std::to_string(class_id));
  return shapes_[static_cast<std::size_t>(class_id - 1)];
}

CsiTrace CsiGenerator::generate(const std::vector<ScheduleItem>& schedule, std::uint64_t seed) const {
  std::vector<std::size_t> lengths;
  for (const auto& item : schedule) {
    if (item.class_id < 1 || item.class_id > static_cast<int>(shapes_.size()))
      throw InvalidArgument("unknown class id " + std::to_string(item.class_id));
    if (!(item.duration_s > 0.0)) throw InvalidArgument("segment durations must be positive");
    lengths.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(item.duration_s * rate_))));
  }

  CsiTrace trace;
  trace.sample_rate = rate_;
  trace.subcarriers.assign(1, {});
  auto& x = trace.subcarriers.front();
  std::size_t total = 0;
  for (auto l : lengths) total += l;
  x.reserve(total);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double nd = static_cast<double>(n_);

  std::size_t start = 0;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const ClassShape& sh = shapes_[static_cast<std::size_t>(schedule[s].class_id - 1)];
    const std::size_t len = lengths[s];
    cvec seg(len, cplx(dc_, 0.0));

    const double phi = phase(rng);
    if (sh.tone_amplitude > 0.0) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(sh.tone_bin) / nd;
      for (std::size_t m = 0; m < len; ++m)
        seg[m] += std::polar(sh.tone_amplitude, w * static_cast<double>(start + m) + phi);
    }

    if (sh.level > 0.0) {
      // Circular synthesis on a fine grid of m_s points per window bin.
      const std::size_t m_s = std::max<std::size_t>(kQuadPerBin, (len + n_ - 1) / n_);
      const std::size_t big = n_ * m_s;
      cvec spec(big, cplx(0.0, 0.0));
      const long k0 = static_cast<long>(std::floor(sh.lo_bin * static_cast<double>(m_s))) - 1;
      const long k1 = static_cast<long>(std::ceil(sh.hi_bin * static_cast<double>(m_s))) + 1;
      for (long k = k0; k <= k1; ++k) {
        const double nu = static_cast<double>(k) / static_cast<double>(m_s);
        const double wgt = cell_weight(nu, sh.lo_bin, sh.hi_bin, m_s);
        if (wgt <= 0.0) continue;
        const double sd = std::sqrt(sh.level * nd * wgt / 2.0);
        spec[static_cast<std::size_t>(k)] = cplx(sd * normal(rng), sd * normal(rng));
      }
      FftPlan plan(big, FftPlan::Direction::backward);
      cvec noise(big);
      plan.execute(spec, noise);
      const double scale = 1.0 / std::sqrt(static_cast<double>(big));
      for (std::size_t m = 0; m < len; ++m) seg[m] += noise[m] * scale;
    }

    x.insert(x.end(), seg.begin(), seg.end());
    trace.labels.push_back({start, start + len, schedule[s].class_id});
    start += len;
  }
  return trace;
}

CsiTrace generate_csi_trace(const SensingModelParams& model, const std::vector<ScheduleItem>& schedule,
                            double sample_rate, std::uint64_t seed) {
  return CsiGenerator(model, sample_rate).generate(schedule, seed);
}

}  // namespace iscc
