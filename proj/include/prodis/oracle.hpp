#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "prodis/measure.hpp"
#include "prodis/models.hpp"

namespace prodis::oracle {

// Finite-dimensional cylinder event: coordinate index -> admissible states.
// Unconstrained coordinates are omitted.
struct CoordinateConstraint {
  std::size_t index;
  std::vector<double> states;
};

struct CylinderEvent {
  std::vector<CoordinateConstraint> coords;

  // Convenience: pin each listed coordinate to a single state.
  static CylinderEvent pinned(const std::vector<std::pair<std::size_t, double>>& pins);

  std::size_t max_index() const;
  // Checks indices are distinct and every subset is a nonempty subset of the
  // model's state list.
  void validate(const std::vector<double>& state_space) const;
  bool holds(const std::vector<double>& points) const;
};

// Largest constrained coordinate index joint_exact accepts (the regime oracle
// enumerates all 2^(n+1) regime sequences).
inline constexpr std::size_t kMaxEventIndex = 20;

// Exact probability of the cylinder event under the model's observed law,
// computed from the averaged product formula -- no sampling involved.
// Supported: iid_uniform_bernoulli, random_walk, exchangeable_bernoulli,
// regime_switching.  Others throw UnsupportedModel.
double joint_exact(const Model& model, const CylinderEvent& event);

// Number of midpoint-rule nodes used to average over a continuous prior.
inline constexpr std::size_t kPriorQuadratureNodes = 100000;

// E[theta^ones * (1-theta)^zeros] under the prior.
double prior_moment(const ExchangeablePrior& prior, unsigned ones, unsigned zeros);

// Stationary vector of a 2x2 transition matrix; errors if the chain is
// reducible (both off-diagonal entries zero).
std::array<double, 2> stationary_vector(const std::array<std::array<double, 2>, 2>& transition);

// Builds regime parameters with the stationary vector derived from the
// transition matrix.
RegimeParams regime_params_with_stationary(double mu1, double lambda1,
                                           const std::array<std::array<double, 2>, 2>& transition);

// Almost-sure limit of the running mean of f along the regime-switching
// process: pi_mu * mu(f) + pi_lambda * lambda(f).
double regime_ergodic_limit(const RegimeParams& params, const Observable& f);

}  // namespace prodis::oracle
