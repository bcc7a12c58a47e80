#include "prodis/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "prodis/compensated.hpp"
#include "prodis/errors.hpp"

namespace prodis {

namespace {

std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Nodes and weights for Gauss-Legendre quadrature on [-1, 1], computed once by
// Newton iteration on the Legendre recurrence.  Order 64 integrates
// polynomials up to degree 127 exactly, far beyond the observable menu.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre_64() {
  static const GaussLegendre table = [] {
    constexpr int n = 64;
    GaussLegendre t;
    t.nodes.resize(n);
    t.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      // Chebyshev-like initial guess for the i-th root.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p1 = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        // Evaluate P_n(x) and P_{n-1}(x) by recurrence.
        double p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double deriv = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / deriv;
        x -= dx;
        if (std::abs(dx) < 1e-15) {
          p0 = 1.0;
          p1 = x;
          for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
          }
          double d = n * (x * p1 - p0) / (x * x - 1.0);
          t.nodes[i] = x;
          t.weights[i] = 2.0 / ((1.0 - x * x) * d * d);
          break;
        }
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

Observable Observable::indicator_at(double state) {
  Observable f(Kind::Indicator, "indicator(" + format_param(state) + ")");
  f.param_ = state;
  return f;
}

Observable Observable::identity() { return Observable(Kind::Identity, "identity"); }

Observable Observable::square() { return Observable(Kind::Square, "square"); }

Observable Observable::constant(double c) {
  Observable f(Kind::Constant, "constant(" + format_param(c) + ")");
  f.param_ = c;
  return f;
}

Observable Observable::piecewise_linear(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 2 || x.size() != y.size()) {
    throw InvariantViolation("piecewise_linear needs >= 2 nodes and matching x/y sizes");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw InvariantViolation("piecewise_linear nodes must be strictly increasing");
    }
  }
  Observable f(Kind::PiecewiseLinear, "piecewise_linear[" + std::to_string(x.size()) + "]");
  f.xs_ = std::move(x);
  f.ys_ = std::move(y);
  return f;
}

double Observable::operator()(double x) const {
  switch (kind_) {
    case Kind::Indicator:
      return x == param_ ? 1.0 : 0.0;
    case Kind::Identity:
      return x;
    case Kind::Square:
      return x * x;
    case Kind::Constant:
      return param_;
    case Kind::PiecewiseLinear: {
      if (x < xs_.front() || x > xs_.back()) {
        throw std::domain_error(id_ + " undefined at " + format_param(x));
      }
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return ys_.back();
      std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
      std::size_t lo = hi - 1;
      double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
      return ys_[lo] + w * (ys_[hi] - ys_[lo]);
    }
  }
  throw std::logic_error("unreachable observable kind");
}

FiniteMeasure::FiniteMeasure(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw InvariantViolation("finite measure needs nonempty support");
  if (support_.size() != weights_.size()) {
    throw InvariantViolation("support/weight size mismatch");
  }
  std::set<double> seen;
  for (double s : support_) {
    if (!std::isfinite(s)) throw InvariantViolation("non-finite support point");
    if (!seen.insert(s).second) throw InvariantViolation("duplicate support point");
  }
  CompensatedSum total;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvariantViolation("negative or NaN weight");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > kWeightSumTolerance) {
    throw InvariantViolation("weights sum to " + std::to_string(total.value()) +
                             ", not 1 within 1e-12; refusing to renormalize");
  }
  cumulative_.resize(weights_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    running += weights_[i];
    cumulative_[i] = running;
  }
  cumulative_.back() = 1.0;
}

double FiniteMeasure::integrate(const Observable& f) const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    acc.add(weights_[i] * f(support_[i]));
  }
  return acc.value();
}

double FiniteMeasure::mean() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    acc.add(weights_[i] * support_[i]);
  }
  return acc.value();
}

double FiniteMeasure::sample(RngStream& stream) const {
  double u = stream.next_uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;  // u may tie the final cumulative value
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

double FiniteMeasure::mass_at(double state) const {
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] == state) return weights_[i];
  }
  return 0.0;
}

PushforwardMeasure::PushforwardMeasure(double half_width, double scale)
    : half_width_(half_width), scale_(scale) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvariantViolation("pushforward half_width must be positive and finite");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvariantViolation("pushforward scale must be positive and finite");
  }
}

double PushforwardMeasure::interval_mass(double lo, double hi) const {
  if (lo > hi) throw InvariantViolation("interval_mass needs lo <= hi");
  double a = -half_width_ * scale_;
  double b = half_width_ * scale_;
  double clipped_lo = std::max(lo, a);
  double clipped_hi = std::min(hi, b);
  if (clipped_lo >= clipped_hi) return 0.0;
  return (clipped_hi - clipped_lo) / (b - a);
}

double PushforwardMeasure::integrate(const Observable& f) const {
  const GaussLegendre& gl = gauss_legendre_64();
  CompensatedSum acc;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    // Node in base space, then pushed forward by multiplication with scale.
    double z = gl.nodes[i] * half_width_;
    acc.add(0.5 * gl.weights[i] * f(scale_ * z));
  }
  return acc.value();
}

double PushforwardMeasure::sample(RngStream& stream) const {
  double z = stream.next_uniform_in(-half_width_, half_width_);
  return scale_ * z;
}

double integrate(const Measure& m, const Observable& f) {
  return std::visit([&](const auto& inner) { return inner.integrate(f); }, m);
}

double mean(const Measure& m) {
  return std::visit([](const auto& inner) { return inner.mean(); }, m);
}

double sample(const Measure& m, RngStream& stream) {
  return std::visit([&](const auto& inner) { return inner.sample(stream); }, m);
}

FiniteMeasure bernoulli_measure(double p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvariantViolation("bernoulli parameter outside [0,1]");
  return FiniteMeasure({0.0, 1.0}, {1.0 - p1, p1});
}

FiniteMeasure sign_measure(double p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvariantViolation("sign parameter outside [0,1]");
  return FiniteMeasure({-1.0, 1.0}, {1.0 - p1, p1});
}

}  // namespace prodis
