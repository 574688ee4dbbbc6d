#pragma once

#include <vector>

#include "iscc/stat/sensing_model.hpp"

namespace iscc {

struct DeltaStats {
  double mu = 0.0;
  double var = 0.0;
};

// ΔP moments at step tau for class i, averaged over a uniform onset offset
// within the step and including the class deviation term.
DeltaStats delta_moments(const SensingModelParams& model, int class_id, double F, double tau);

// Standard normal upper tail.
double q_function(double x);

// Probability that an onset of class i (>= 2) yields ΔP <= eta.
double miss_rate(const SensingModelParams& model, int class_id, double F, double tau, double eta);

// Probability that a static-phase ΔP exceeds eta.
double false_positive_rate(const SensingModelParams& model, double F, double tau, double eta);

struct OperatingPoint {
  double eta = 0.0;
  double p_false = 0.0;
  std::vector<double> p_miss;  // index j is class j + 2
};

OperatingPoint operating_point(const SensingModelParams& model, double F, double tau, double eta);

struct Crossing {
  double eta = 0.0;
  double p = 0.0;
  int binding_class = 2;  // class attaining the max miss rate at eta
};

// Threshold where the false-positive rate equals the worst-class miss rate.
// Throws NoCrossingError if some action class has mean ΔP <= 0.
Crossing crossing_point(const SensingModelParams& model, double F, double tau);

}  // namespace iscc
