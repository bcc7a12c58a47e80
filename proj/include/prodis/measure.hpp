#pragma once

#include <string>
#include <variant>
#include <vector>

#include "prodis/rng.hpp"

namespace prodis {

// Real-valued function on the state space.  Built from a small closed menu so
// instances carry a stable id for reports and can be validated up front.
// Evaluation outside a piecewise-linear domain throws std::domain_error.
class Observable {
 public:
  static Observable indicator_at(double state);
  static Observable identity();
  static Observable square();
  static Observable constant(double c);
  // Nodes x must be strictly increasing; defined on [x.front(), x.back()].
  static Observable piecewise_linear(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  const std::string& id() const { return id_; }

 private:
  enum class Kind { Indicator, Identity, Square, Constant, PiecewiseLinear };

  Observable(Kind kind, std::string id) : kind_(kind), id_(std::move(id)) {}

  Kind kind_;
  std::string id_;
  double param_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Probability measure with finite support.  Immutable after construction.
// Construction rejects (never renormalizes) weights that are negative or do
// not sum to 1 within kWeightSumTolerance, and duplicated support points.
class FiniteMeasure {
 public:
  static constexpr double kWeightSumTolerance = 1e-12;

  FiniteMeasure(std::vector<double> support, std::vector<double> weights);

  double integrate(const Observable& f) const;
  double mean() const;
  // Inverse-CDF draw: one uniform, binary search over precomputed cumulative
  // weights.
  double sample(RngStream& stream) const;

  double mass_at(double state) const;  // 0 for states outside the support
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

// Dirac measure at a single point.  Sampling consumes no randomness.
class PointMass {
 public:
  explicit PointMass(double atom) : atom_(atom) {}

  double atom() const { return atom_; }
  double integrate(const Observable& f) const { return f(atom_); }
  double mean() const { return atom_; }
  double sample(RngStream&) const { return atom_; }

 private:
  double atom_;
};

// Law of scale * Z where Z is uniform on [-half_width, half_width]: the
// one-step observation law of the stochastic-volatility model, with
// scale = exp(h/2).  interval_mass is closed-form; integrate uses fixed-order
// Gauss-Legendre quadrature over the base law (exact for polynomials up to
// degree 2*order - 1).
class PushforwardMeasure {
 public:
  PushforwardMeasure(double half_width, double scale);

  double interval_mass(double lo, double hi) const;
  double integrate(const Observable& f) const;
  double mean() const { return 0.0; }  // scale * E[Z], and Z is centred
  double sample(RngStream& stream) const;

  double half_width() const { return half_width_; }
  double scale() const { return scale_; }

 private:
  double half_width_;
  double scale_;
};

using Measure = std::variant<FiniteMeasure, PointMass, PushforwardMeasure>;

double integrate(const Measure& m, const Observable& f);
double mean(const Measure& m);
double sample(const Measure& m, RngStream& stream);

// Bernoulli law on {0, 1} with P({1}) = p1.
FiniteMeasure bernoulli_measure(double p1);
// Law on {-1, +1} with P({+1}) = p1.
FiniteMeasure sign_measure(double p1);

}  // namespace prodis
