#include "iscc/signal/spectral.hpp"

#include <cmath>

#include "iscc/errors.hpp"

namespace iscc {

void WindowSpec::validate(double sample_rate) const {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  if (!(step_s > 0.0) || !(step_s <= window_len_s))
    throw InvalidArgument("window spec needs 0 < step <= window length");
  if (!(band_lo_hz >= 0.0) || !(band_lo_hz < band_hi_hz) || band_hi_hz > sample_rate / 2.0)
    throw InvalidArgument("band must satisfy 0 <= lo < hi <= F/2");
}

SampleGrid quantize(const WindowSpec& spec, double sample_rate) {
  spec.validate(sample_rate);
  const double w = std::round(spec.window_len_s * sample_rate);
  const double s = std::round(spec.step_s * sample_rate);
  if (w < 2.0 || s < 2.0)
    throw InvalidArgument("window and step must each span at least two samples");
  return {static_cast<std::size_t>(w), static_cast<std::size_t>(s)};
}

BandBins band_bins(const WindowSpec& spec, double sample_rate, std::size_t n) {
  const double t_eff = static_cast<double>(n) / sample_rate;
  const double lo = std::floor(spec.band_lo_hz * t_eff);
  const double hi = std::ceil(spec.band_hi_hz * t_eff);
  if (lo < 0.0 || hi > static_cast<double>(n) - 1.0 || lo > hi)
    throw InvalidArgument("band lies outside the spectrum");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

cvec dft_window(std::span<const cplx> h) {
  if (h.empty()) throw InvalidArgument("dft_window needs a nonempty window");
  for (const auto& v : h)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("dft_window input is not finite");
  FftPlan plan(h.size(), FftPlan::Direction::forward);
  cvec out(h.size());
  plan.execute(h, out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(h.size()));
  for (auto& v : out) v *= scale;
  return out;
}

double band_power(std::span<const cplx> spectrum, BandBins bins) {
  if (bins.hi >= spectrum.size() || bins.lo > bins.hi)
    throw InvalidArgument("band lies outside the spectrum");
  double e = 0.0;
  for (std::size_t f = bins.lo; f <= bins.hi; ++f) e += std::norm(spectrum[f]);
  return e / static_cast<double>(spectrum.size());
}

double high_freq_power(std::span<const cplx> spectrum, const WindowSpec& spec, double sample_rate) {
  if (spectrum.empty()) throw InvalidArgument("empty spectrum");
  return band_power(spectrum, band_bins(spec, sample_rate, spectrum.size()));
}

WindowPowerMeter::WindowPowerMeter(const WindowSpec& spec, double sample_rate)
    : grid_(quantize(spec, sample_rate)),
      bins_(band_bins(spec, sample_rate, grid_.window)),
      plan_(grid_.window, FftPlan::Direction::forward),
      spectrum_(grid_.window) {}

double WindowPowerMeter::operator()(std::span<const cplx> window) {
  if (window.size() != grid_.window) throw InvalidArgument("window length mismatch");
  plan_.execute(window, spectrum_);
  // Unnormalized transform: |X|^2 = n |W|^2, so P = sum|X|^2 / n^2.
  double e = 0.0;
  for (std::size_t f = bins_.lo; f <= bins_.hi; ++f) e += std::norm(spectrum_[f]);
  const double n = static_cast<double>(grid_.window);
  return e / (n * n);
}

std::vector<double> window_power_series(std::span<const cplx> x, const WindowSpec& spec,
                                        double sample_rate) {
  WindowPowerMeter meter(spec, sample_rate);
  const std::size_t n = meter.window();
  const std::size_t step = meter.step();
  if (x.size() < n) throw InvalidArgument("trace shorter than one window");
  std::vector<double> out;
  out.reserve((x.size() - n) / step + 1);
  for (std::size_t end = n - 1; end < x.size(); end += step)
    out.push_back(meter(x.subspan(end + 1 - n, n)));
  return out;
}

}  // namespace iscc
