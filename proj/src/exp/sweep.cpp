#include "iscc/exp/sweep.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>

#include "iscc/errors.hpp"
#include "iscc/exp/schemes.hpp"

namespace iscc {

SweepAxis parse_axis(const std::string& name) {
  if (name == "edge_compute") return SweepAxis::edge_compute;
  if (name == "static_prob") return SweepAxis::static_prob;
  if (name == "permitted_delay") return SweepAxis::permitted_delay;
  if (name == "device_count") return SweepAxis::device_count;
  throw InvalidArgument("unknown sweep axis '" + name + "'");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::edge_compute:
      return "edge_compute";
    case SweepAxis::static_prob:
      return "static_prob";
    case SweepAxis::permitted_delay:
      return "permitted_delay";
    case SweepAxis::device_count:
      return "device_count";
  }
  return "";
}

void SweepSpec::validate() const {
  if (values.empty()) throw InvalidArgument("sweep has no values");
  if (schemes.empty()) throw InvalidArgument("sweep has no schemes");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw InvalidArgument("sweep values must be strictly increasing");
  if (axis == SweepAxis::device_count)
    for (double v : values)
      if (v < 1.0 || v != std::floor(v)) throw InvalidArgument("device counts must be positive integers");
}

Scenario sweep_point(const Scenario& base, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::edge_compute: {
      Scenario s = base;
      s.sys.f_edge_total = value;
      return s;
    }
    case SweepAxis::static_prob: {
      Scenario s = base;
      set_static_prior(s, value);
      return s;
    }
    case SweepAxis::permitted_delay: {
      Scenario s = base;
      s.sys.T_max = value;
      return s;
    }
    case SweepAxis::device_count:
      return resample_devices(base, static_cast<int>(value), base.seed + 1);
  }
  return base;
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec, const AdmmOptions& options,
                                unsigned threads) {
  spec.validate();
  base.validate();
  // u(F) depends only on the class statistics and p_min, which no axis moves.
  auto taus = std::make_shared<const DetectionTauTable>(base.model, base.sys.p_min);

  const std::size_t S = spec.schemes.size();
  const std::size_t total = spec.values.size() * S;
  std::vector<SweepRow> rows(total);
  auto run_one = [&](std::size_t idx) {
    const double v = spec.values[idx / S];
    const Scheme& sch = spec.schemes[idx % S];
    const Scenario s = sweep_point(base, spec.axis, v);
    const Solution sol = run_scheme(s, sch, options, taus);
    rows[idx] = {v, sch.name(), sol.accuracy, sol.iterations, sol.converged};
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < threads; ++w)
      jobs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < total; i = next++) run_one(i);
      }));
    for (auto& j : jobs) j.get();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis,scheme,accuracy,iterations,converged\n";
  for (const auto& r : rows)
    out << std::setprecision(10) << r.value << ',' << r.scheme << ',' << std::setprecision(12) << r.accuracy
        << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
}

}  // namespace iscc
