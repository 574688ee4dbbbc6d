#include "iscc/stat/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "iscc/errors.hpp"
#include "iscc/signal/spectral.hpp"
#include "iscc/stat/delta_stats.hpp"

namespace iscc {

namespace {

struct Accum {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  double var() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

// Nonnegative least squares for y = a + b x with two unknowns.
void fit_line_nonneg(const std::vector<double>& x, const std::vector<double>& y, double& a, double& b) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double det = n * sxx - sx * sx;
  a = (sxx * sy - sx * sxy) / det;
  b = (n * sxy - sx * sy) / det;
  if (a >= 0.0 && b >= 0.0) return;
  // Try each single-parameter model and keep the better feasible one.
  const double a_only = std::max(0.0, sy / n);
  const double b_only = sxx > 0.0 ? std::max(0.0, sxy / sxx) : 0.0;
  double err_a = 0.0, err_b = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    err_a += (y[k] - a_only) * (y[k] - a_only);
    err_b += (y[k] - b_only * x[k]) * (y[k] - b_only * x[k]);
  }
  if (err_a <= err_b) {
    a = a_only;
    b = 0.0;
  } else {
    a = 0.0;
    b = b_only;
  }
}

}  // namespace

double nmse(const std::vector<double>& empirical, const std::vector<double>& fitted) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < empirical.size(); ++k) {
    num += (empirical[k] - fitted[k]) * (empirical[k] - fitted[k]);
    den += empirical[k] * empirical[k];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

FitResult fit_model_params(const std::vector<CsiTrace>& traces, const std::vector<FitGridPoint>& grid,
                           const FitOptions& options) {
  if (grid.empty()) throw InvalidArgument("fit grid is empty");
  int num_classes = 0;
  std::map<int, std::size_t> segment_count;
  for (const auto& t : traces) {
    t.validate();
    for (const auto& s : t.labels) {
      num_classes = std::max(num_classes, s.class_id);
      ++segment_count[s.class_id];
    }
  }
  if (num_classes < 1) throw FitError("no labelled segments");

  FitResult result;
  std::vector<std::string> deficient;
  for (const auto& gp : grid) {
    WindowSpec spec{options.window_len_s, gp.tau, options.band_lo_hz, options.band_hi_hz};
    std::vector<Accum> power(static_cast<std::size_t>(num_classes));
    std::vector<Accum> delta(static_cast<std::size_t>(num_classes));
    for (const auto& t : traces) {
      if (std::abs(t.sample_rate - gp.F) > 1e-9 * gp.F) continue;
      const auto& x = t.subcarriers.front();
      WindowPowerMeter meter(spec, t.sample_rate);
      const std::size_t n = meter.window();
      const std::size_t step = meter.step();
      if (x.size() < n) continue;
      std::vector<double> p;
      std::vector<std::size_t> ends;
      for (std::size_t end = n - 1; end < x.size(); end += step) {
        p.push_back(meter(std::span<const cplx>(x).subspan(end + 1 - n, n)));
        ends.push_back(end);
      }
      for (std::size_t j = 0; j < p.size(); ++j) {
        const std::size_t begin = ends[j] + 1 - n;
        const LabelSegment* seg = t.label_at(begin);
        if (seg && seg->end > ends[j]) power[static_cast<std::size_t>(seg->class_id - 1)].add(p[j]);
        if (j == 0) continue;
        const std::size_t pair_begin = begin - step;
        const LabelSegment* first = t.label_at(pair_begin);
        if (!first || first->class_id != 1) continue;
        if (first->end > ends[j]) {
          delta[0].add(p[j] - p[j - 1]);
          continue;
        }
        // Onset inside the entering step (ends[j-1], ends[j]].
        const std::size_t onset = first->end;
        if (onset <= ends[j - 1] || onset > ends[j]) continue;
        const LabelSegment* act = t.label_at(onset);
        if (!act || act->start != onset || act->class_id < 2 || act->end <= ends[j]) continue;
        delta[static_cast<std::size_t>(act->class_id - 1)].add(p[j] - p[j - 1]);
      }
    }
    for (int i = 1; i <= num_classes; ++i) {
      const auto& pa = power[static_cast<std::size_t>(i - 1)];
      const auto& da = delta[static_cast<std::size_t>(i - 1)];
      if (pa.n < options.min_samples || da.n < options.min_samples) {
        std::ostringstream os;
        os << "(F=" << gp.F << ", tau=" << gp.tau << ", class=" << i << ": " << pa.n << " windows, "
           << da.n << " deltas)";
        deficient.push_back(os.str());
        continue;
      }
      result.cells.push_back({i, gp.F, gp.tau, pa.n, pa.mean, pa.var(), da.n, da.mean, da.var()});
    }
  }
  if (!deficient.empty()) {
    std::string msg = "insufficient data in cells:";
    for (const auto& d : deficient) msg += " " + d;
    throw FitError(msg);
  }

  const double T = options.window_len_s;
  SensingModelParams& m = result.params;
  m.window_len_s = T;
  m.band_lo_hz = options.band_lo_hz;
  m.band_hi_hz = options.band_hi_hz;

  double total_segments = 0.0;
  for (auto& [k, v] : segment_count) total_segments += static_cast<double>(v);
  for (int i = 1; i <= num_classes; ++i) {
    std::vector<double> xs, ys;
    for (const auto& c : result.cells)
      if (c.class_id == i) {
        xs.push_back(1.0 / (T * c.F));
        ys.push_back(c.power_mean);
      }
    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    if (*xmax - *xmin <= 0.0) throw FitError("fit needs at least two distinct sampling rates");
    ActionClassParams p;
    p.class_id = i;
    fit_line_nonneg(xs, ys, p.lambda, p.r);
    if (!options.priors.empty()) {
      if (options.priors.size() != static_cast<std::size_t>(num_classes))
        throw InvalidArgument("prior count does not match class count");
      p.q = options.priors[static_cast<std::size_t>(i - 1)];
    } else {
      p.q = static_cast<double>(segment_count[i]) / total_segments;
    }
    m.classes.push_back(p);
  }

  // σc² through the origin: var ≈ σc² g, g = 4λx + 2r x², relative weights.
  {
    double num = 0.0, den = 0.0, num_u = 0.0, den_u = 0.0;
    bool all_positive = true;
    for (const auto& c : result.cells) {
      const auto& p = m.classes[static_cast<std::size_t>(c.class_id - 1)];
      const double x = 1.0 / (T * c.F);
      const double g = 4.0 * p.lambda * x + 2.0 * p.r * x * x;
      num_u += g * c.power_var;
      den_u += g * g;
      if (c.power_var > 0.0) {
        const double h = g / c.power_var;
        num += h;
        den += h * h;
      } else {
        all_positive = false;
      }
    }
    if (all_positive && den > 0.0)
      m.sigma_c_sq = num / den;
    else
      m.sigma_c_sq = den_u > 0.0 ? std::max(0.0, num_u / den_u) : 0.0;
  }

  // σd,i²: mean ΔP-variance residual with σd switched off.
  for (int i = 1; i <= num_classes; ++i) {
    double acc = 0.0;
    int cnt = 0;
    for (const auto& c : result.cells) {
      if (c.class_id != i) continue;
      acc += c.delta_var - delta_moments(m, i, c.F, c.tau).var;
      ++cnt;
    }
    m.classes[static_cast<std::size_t>(i - 1)].sigma_d_sq = std::max(0.0, acc / cnt);
  }

  for (int i = 1; i <= num_classes; ++i) {
    std::vector<double> em, fm, ev, fv, edm, fdm, edv, fdv;
    for (const auto& c : result.cells) {
      if (c.class_id != i) continue;
      const WindowPowerMoments w = window_power_moments(m, i, c.F);
      const DeltaStats d = delta_moments(m, i, c.F, c.tau);
      em.push_back(c.power_mean);
      fm.push_back(w.mean);
      ev.push_back(c.power_var);
      fv.push_back(w.var);
      edm.push_back(c.delta_mean);
      fdm.push_back(d.mu);
      edv.push_back(c.delta_var);
      fdv.push_back(d.var);
    }
    ClassFitQuality q;
    q.class_id = i;
    q.nmse_power_mean = nmse(em, fm);
    q.nmse_power_var = nmse(ev, fv);
    q.nmse_delta_mean = i == 1 ? std::numeric_limits<double>::quiet_NaN() : nmse(edm, fdm);
    q.nmse_delta_var = nmse(edv, fdv);
    result.quality.push_back(q);
  }
  return result;
}

}  // namespace iscc
