#include "prodis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "prodis/compensated.hpp"
#include "prodis/errors.hpp"

namespace prodis::oracle {

namespace {

// Per-coordinate factor table: factor[i] = expected mass the i-th latent law
// assigns to the admissible subset, already averaged where averaging is
// coordinate-independent.
struct EventTable {
  std::size_t top;                        // largest constrained index
  std::vector<const CoordinateConstraint*> by_index;  // nullptr = unconstrained
};

EventTable index_event(const CylinderEvent& event) {
  EventTable t;
  t.top = event.max_index();
  t.by_index.assign(t.top + 1, nullptr);
  for (const auto& c : event.coords) t.by_index[c.index] = &c;
  return t;
}

bool subset_contains(const std::vector<double>& states, double x) {
  return std::find(states.begin(), states.end(), x) != states.end();
}

// Product over constrained coordinates of E xi_i(A_i) when the E xi_i(A_i)
// are equal across i and the xi_i are independent: both half-half models.
double independent_half_product(const CylinderEvent& event) {
  double p = 1.0;
  for (const auto& c : event.coords) {
    p *= 0.5 * static_cast<double>(c.states.size());
  }
  return p;
}

double exchangeable_probability(const ExchangeableBernoulli& model, const CylinderEvent& event) {
  unsigned ones = 0;
  unsigned zeros = 0;
  for (const auto& c : event.coords) {
    if (c.states.size() == 2) continue;  // whole state space: factor 1
    if (c.states[0] == 1.0) {
      ++ones;
    } else {
      ++zeros;
    }
  }
  return prior_moment(model.prior(), ones, zeros);
}

double regime_probability(const RegimeSwitching& model, const CylinderEvent& event) {
  const RegimeParams& p = model.params();
  EventTable table = index_event(event);
  std::size_t steps = table.top + 1;
  // Emission mass each regime assigns to the admissible subset at coordinate i.
  auto subset_mass = [&](int regime, const CoordinateConstraint& c) {
    double p1 = regime == 0 ? p.mu1 : p.lambda1;
    double mass = 0.0;
    for (double s : c.states) mass += s == 1.0 ? p1 : 1.0 - p1;
    return mass;
  };
  // Deliberate brute force: walk every regime sequence of length steps.  The
  // kMaxEventIndex cap keeps this tractable, and the lack of cleverness is the
  // point -- this is the ground truth the samplers are judged against.
  CompensatedSum total;
  std::size_t sequences = std::size_t{1} << steps;
  for (std::size_t bits = 0; bits < sequences; ++bits) {
    int regime = static_cast<int>(bits & 1);
    double weight = p.stationary[regime];
    if (table.by_index[0] != nullptr) weight *= subset_mass(regime, *table.by_index[0]);
    for (std::size_t i = 1; i < steps && weight != 0.0; ++i) {
      int next = static_cast<int>((bits >> i) & 1);
      weight *= p.transition[regime][next];
      regime = next;
      if (table.by_index[i] != nullptr) weight *= subset_mass(regime, *table.by_index[i]);
    }
    total.add(weight);
  }
  return total.value();
}

}  // namespace

CylinderEvent CylinderEvent::pinned(const std::vector<std::pair<std::size_t, double>>& pins) {
  CylinderEvent e;
  e.coords.reserve(pins.size());
  for (const auto& [index, state] : pins) {
    e.coords.push_back({index, {state}});
  }
  return e;
}

std::size_t CylinderEvent::max_index() const {
  if (coords.empty()) throw InvariantViolation("cylinder event constrains no coordinate");
  std::size_t top = 0;
  for (const auto& c : coords) top = std::max(top, c.index);
  return top;
}

void CylinderEvent::validate(const std::vector<double>& state_space) const {
  if (coords.empty()) throw InvariantViolation("cylinder event constrains no coordinate");
  std::set<std::size_t> indices;
  for (const auto& c : coords) {
    if (!indices.insert(c.index).second) {
      throw InvariantViolation("cylinder event repeats a coordinate index");
    }
    if (c.states.empty()) throw InvariantViolation("empty admissible subset");
    std::set<double> seen;
    for (double s : c.states) {
      if (!subset_contains(state_space, s)) {
        throw InvariantViolation("admissible subset leaves the state space");
      }
      if (!seen.insert(s).second) throw InvariantViolation("admissible subset repeats a state");
    }
  }
}

bool CylinderEvent::holds(const std::vector<double>& points) const {
  for (const auto& c : coords) {
    if (c.index >= points.size()) return false;
    if (!subset_contains(c.states, points[c.index])) return false;
  }
  return true;
}

double joint_exact(const Model& model, const CylinderEvent& event) {
  const std::vector<double>* states = model.states();
  if (states == nullptr || model.is_canonical()) {
    throw UnsupportedModel("no exact joint law for model " + model.id());
  }
  event.validate(*states);
  if (event.max_index() > kMaxEventIndex) {
    throw InvariantViolation("cylinder event dimension exceeds the enumeration bound of 20");
  }
  if (dynamic_cast<const IidUniformBernoulli*>(&model) != nullptr ||
      dynamic_cast<const RandomWalkIncrements*>(&model) != nullptr) {
    return independent_half_product(event);
  }
  if (const auto* exch = dynamic_cast<const ExchangeableBernoulli*>(&model)) {
    return exchangeable_probability(*exch, event);
  }
  if (const auto* regime = dynamic_cast<const RegimeSwitching*>(&model)) {
    return regime_probability(*regime, event);
  }
  throw UnsupportedModel("no exact joint law for model " + model.id());
}

double prior_moment(const ExchangeablePrior& prior, unsigned ones, unsigned zeros) {
  struct Visitor {
    unsigned ones;
    unsigned zeros;
    double term(double theta) const {
      return std::pow(theta, ones) * std::pow(1.0 - theta, zeros);
    }
    double operator()(const PointPrior& p) const { return term(p.value); }
    double operator()(const TwoPointPrior& p) const {
      return p.weight_a * term(p.a) + (1.0 - p.weight_a) * term(p.b);
    }
    double operator()(const UniformPrior&) const {
      // Midpoint rule with a fixed node count; exactness to ~5e-11 on the
      // polynomial integrands that arise here.
      CompensatedSum acc;
      double h = 1.0 / static_cast<double>(kPriorQuadratureNodes);
      for (std::size_t j = 0; j < kPriorQuadratureNodes; ++j) {
        acc.add(term((static_cast<double>(j) + 0.5) * h));
      }
      return acc.value() * h;
    }
  };
  return std::visit(Visitor{ones, zeros}, prior);
}

std::array<double, 2> stationary_vector(const std::array<std::array<double, 2>, 2>& transition) {
  for (int r = 0; r < 2; ++r) {
    double row = 0.0;
    for (int c = 0; c < 2; ++c) {
      if (!(transition[r][c] >= 0.0)) {
        throw InvariantViolation("transition entries must be nonnegative");
      }
      row += transition[r][c];
    }
    if (std::abs(row - 1.0) > 1e-12) {
      throw InvariantViolation("transition rows must sum to 1 within 1e-12");
    }
  }
  double up = transition[1][0];    // lambda-regime -> mu-regime
  double down = transition[0][1];  // mu-regime -> lambda-regime
  if (up + down == 0.0) {
    throw InvariantViolation("reducible transition matrix has no unique stationary vector");
  }
  double pi0 = up / (up + down);
  return {pi0, 1.0 - pi0};
}

RegimeParams regime_params_with_stationary(
    double mu1, double lambda1, const std::array<std::array<double, 2>, 2>& transition) {
  RegimeParams params;
  params.mu1 = mu1;
  params.lambda1 = lambda1;
  params.transition = transition;
  params.stationary = stationary_vector(transition);
  params.validate();
  return params;
}

double regime_ergodic_limit(const RegimeParams& params, const Observable& f) {
  params.validate();
  double mu_f = sign_measure(params.mu1).integrate(f);
  double lambda_f = sign_measure(params.lambda1).integrate(f);
  return params.stationary[0] * mu_f + params.stationary[1] * lambda_f;
}

}  // namespace prodis::oracle
