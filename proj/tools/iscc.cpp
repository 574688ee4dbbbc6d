#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "iscc/admm/admm.hpp"
#include "iscc/errors.hpp"
#include "iscc/exp/scenario.hpp"
#include "iscc/exp/schemes.hpp"
#include "iscc/exp/sweep.hpp"
#include "iscc/exp/validate.hpp"
#include "iscc/signal/csi_io.hpp"
#include "iscc/signal/detector.hpp"
#include "iscc/signal/generator.hpp"
#include "iscc/stat/delta_stats.hpp"
#include "iscc/stat/fit.hpp"

namespace fs = std::filesystem;
using namespace iscc;

namespace {

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  return f;
}

Scenario scenario_or_default(const std::string& path, std::uint64_t seed) {
  if (!path.empty()) return load_scenario(path);
  return generate_scenario(ScenarioParams{}, seed);
}

AdmmOptions admm_options(double rho, double eps, int imax, unsigned threads) {
  AdmmOptions o;
  o.rho = rho;
  o.epsilon = eps;
  o.i_max = imax;
  o.threads = threads;
  return o;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrated sensing/communication/computation optimizer"};
  app.require_subcommand(1);

  std::string scenario_path, out = ".", scheme_name = "proposed";
  std::uint64_t seed = 1;
  double rho = 1.0, eps = 0.0;
  int imax = 200;
  std::uint64_t mc_samples = 1'000'000;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", seed, "random seed");
    c->add_option("--out", out, "output directory");
  };
  auto solver = [&](CLI::App* c) {
    c->add_option("--scenario", scenario_path, "scenario JSON (default: generated from --seed)");
    c->add_option("--rho", rho, "ADMM penalty");
    c->add_option("--eps", eps, "residual tolerance in cycles/s (0: 1e-3 of the edge budget)");
    c->add_option("--imax", imax, "iteration cap");
    c->add_option("--threads", threads, "worker threads");
  };

  auto* gen = app.add_subcommand("gen", "write a scenario file");
  common(gen);
  int K = 12;
  double q_static = 0.4;
  gen->add_option("--devices", K, "device count");
  gen->add_option("--static-prob", q_static, "prior of the static class");

  auto* opt = app.add_subcommand("optimize", "run one scheme on a scenario");
  common(opt);
  solver(opt);
  opt->add_option("--scheme", scheme_name, "proposed | conventional | fixed-tau=<s>");
  bool verbose = false;
  opt->add_flag("--verbose", verbose, "include per-iteration state in the run artifact");

  auto* sweep = app.add_subcommand("sweep", "sweep one axis for several schemes");
  common(sweep);
  solver(sweep);
  std::string axis = "edge_compute", values;
  std::vector<std::string> schemes = {"proposed", "conventional", "fixed-tau=0.3", "fixed-tau=0.5"};
  sweep->add_option("--axis", axis, "edge_compute | static_prob | permitted_delay | device_count");
  sweep->add_option("--values", values, "comma-separated increasing values")->required();
  sweep->add_option("--schemes", schemes, "schemes to run");

  auto* val = app.add_subcommand("validate", "run an oracle suite");
  common(val);
  val->add_option("--scenario", scenario_path, "scenario JSON (default: generated from --seed)");
  std::string target = "all";
  val->add_option("--target", target, "prop1 | thm1 | thm2 | fit | parseval | all");
  val->add_option("--mc-samples", mc_samples, "Monte-Carlo draws per point");

  auto* det = app.add_subcommand("detect", "run the onset detector over a CSI trace");
  common(det);
  det->add_option("--scenario", scenario_path, "scenario JSON supplying window and band");
  std::string trace_path;
  double rate = 0.0, tau = 0.3, eta = -1.0;
  det->add_option("--trace", trace_path, "CSI CSV (re,im per line)")->required();
  det->add_option("--rate", rate, "sampling rate in Hz")->required();
  det->add_option("--tau", tau, "time step in s");
  det->add_option("--eta", eta, "threshold (default: crossing point of the scenario's model)");

  auto* fit = app.add_subcommand("fit", "fit sensing-model parameters to labelled traces");
  common(fit);
  std::vector<std::string> traces, labels;
  std::vector<double> rates;
  std::string taus = "0.3,0.6";
  double window_len = 1.5, band_lo = 10.0, band_hi = 60.0;
  fit->add_option("--trace", traces, "CSI CSV, one per rate")->required();
  fit->add_option("--labels", labels, "label CSV (start,end,class), one per trace")->required();
  fit->add_option("--rate", rates, "sampling rate per trace")->required();
  fit->add_option("--taus", taus, "comma-separated time steps");
  fit->add_option("--window", window_len, "window length in s");
  fit->add_option("--band-lo", band_lo, "band lower edge in Hz");
  fit->add_option("--band-hi", band_hi, "band upper edge in Hz");

  auto* synth = app.add_subcommand("synth", "generate labelled CSI traces from a scenario's model");
  common(synth);
  synth->add_option("--scenario", scenario_path, "scenario JSON (default: generated from --seed)");
  std::string synth_rates = "150,200,300,400";
  int reps = 40;
  synth->add_option("--rates", synth_rates, "comma-separated sampling rates");
  synth->add_option("--repetitions", reps, "onsets per action class");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir(out);
    if (!dir.empty()) fs::create_directories(dir);
    if (gen->parsed()) {
      ScenarioParams p;
      p.K = K;
      p.sys.K = K;
      p.q_static = q_static;
      auto f = open_out(dir / "scenario.json");
      f << scenario_to_json(generate_scenario(p, seed)).dump(2) << "\n";
      return 0;
    }
    if (opt->parsed()) {
      const Scenario sc = scenario_or_default(scenario_path, seed);
      const Scheme scheme = Scheme::parse(scheme_name);
      const Solution s = run_scheme(sc, scheme, admm_options(rho, eps, imax, threads));
      {
        auto f = open_out(dir / "results.csv");
        write_sweep_csv(f, std::vector<SweepRow>{{sc.sys.f_edge_total, scheme.name(), s.accuracy, s.iterations, s.converged}});
      }
      {
        auto f = open_out(dir / "residuals.csv");
        write_residual_csv(f, s);
      }
      auto f = open_out(dir / "run.json");
      f << run_artifact(s, verbose).dump(2) << "\n";
      std::cout << scheme.name() << " accuracy=" << s.accuracy << " iterations=" << s.iterations
                << (s.converged ? " converged" : " not-converged") << "\n";
      return 0;
    }
    if (sweep->parsed()) {
      const Scenario sc = scenario_or_default(scenario_path, seed);
      SweepSpec spec;
      spec.axis = parse_axis(axis);
      spec.values = parse_list(values);
      for (const auto& s : schemes) spec.schemes.push_back(Scheme::parse(s));
      const auto rows = run_sweep(sc, spec, admm_options(rho, eps, imax, 1), threads);
      auto f = open_out(dir / ("sweep_" + axis_name(spec.axis) + ".csv"));
      write_sweep_csv(f, rows);
      return 0;
    }
    if (val->parsed()) {
      const Scenario sc = scenario_or_default(scenario_path, seed);
      ValidationBudget b;
      b.mc_samples = mc_samples;
      b.seed = seed;
      std::vector<std::string> targets;
      if (target == "all")
        targets = validation_targets();
      else
        targets = {target};
      bool ok = true;
      nlohmann::json all = nlohmann::json::array();
      std::string text;
      for (const auto& t : targets) {
        const ValidationReport r = validate_target(t, sc, b);
        ok = ok && r.pass();
        all.push_back(r.json());
        text += r.text();
      }
      std::cout << text;
      open_out(dir / "validation.txt") << text;
      open_out(dir / "validation.json") << all.dump(2) << "\n";
      return ok ? 0 : 1;
    }
    if (det->parsed()) {
      CsiTrace trace = read_csi_csv(trace_path, rate);
      SensingModelParams model = scenario_path.empty() ? default_sensing_model() : load_scenario(scenario_path).model;
      WindowSpec spec{model.window_len_s, tau, model.band_lo_hz, model.band_hi_hz};
      if (eta < 0.0) eta = crossing_point(model, rate, tau).eta;
      const auto events = detect_onsets(trace, spec, eta);
      auto f = open_out(dir / "detections.csv");
      write_detections_csv(f, events);
      std::cout << events.size() << " onsets at eta=" << eta << "\n";
      return 0;
    }
    if (fit->parsed()) {
      if (traces.size() != labels.size() || traces.size() != rates.size())
        throw InvalidArgument("--trace, --labels and --rate must be given the same number of times");
      std::vector<CsiTrace> data;
      std::vector<FitGridPoint> grid;
      for (std::size_t i = 0; i < traces.size(); ++i) {
        CsiTrace t = read_csi_csv(traces[i], rates[i]);
        t.labels = read_labels_csv(labels[i]);
        data.push_back(std::move(t));
        for (double s : parse_list(taus)) grid.push_back({rates[i], s});
      }
      FitOptions o;
      o.window_len_s = window_len;
      o.band_lo_hz = band_lo;
      o.band_hi_hz = band_hi;
      const FitResult r = fit_model_params(data, grid, o);
      save_sensing_model(r.params, (dir / "model.json").string());
      auto f = open_out(dir / "fit_quality.csv");
      f << "class,nmse_power_mean,nmse_power_var,nmse_delta_mean,nmse_delta_var\n";
      for (const auto& q : r.quality)
        f << q.class_id << ',' << q.nmse_power_mean << ',' << q.nmse_power_var << ',' << q.nmse_delta_mean << ','
          << q.nmse_delta_var << '\n';
      return 0;
    }
    if (synth->parsed()) {
      const Scenario sc = scenario_or_default(scenario_path, seed);
      const auto rs = parse_list(synth_rates);
      const auto ts = synth_fit_traces(sc.model, rs, reps, seed);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string stem = "trace_" + std::to_string(static_cast<long>(rs[i]));
        auto f = open_out(dir / (stem + ".csv"));
        write_csi_csv(f, ts[i]);
        auto l = open_out(dir / (stem + "_labels.csv"));
        write_labels_csv(l, ts[i].labels);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
