#pragma once

#include <cstdint>
#include <vector>

#include "prodis/exec.hpp"
#include "prodis/models.hpp"
#include "prodis/oracle.hpp"

namespace prodis {

struct FrequencyEstimate {
  std::size_t hits = 0;
  std::size_t replications = 0;
  double frequency = 0.0;
  double std_error = 0.0;  // binomial, sqrt(p(1-p)/R) at the observed p
};

// Two-stage Monte Carlo frequency of a cylinder event.  Replication r uses
// streams (seed, r, 0) and (seed, r, 1).
FrequencyEstimate mc_cylinder_frequency(const Model& model, const oracle::CylinderEvent& event,
                                        std::size_t replications, std::uint64_t seed,
                                        ExecutionPolicy policy);

// Evaluates many events against one shared set of sampled paths (the paths
// are the expensive part).  Result i corresponds to events[i].
std::vector<FrequencyEstimate> mc_cylinder_frequencies(
    const Model& model, const std::vector<oracle::CylinderEvent>& events,
    std::size_t replications, std::uint64_t seed, ExecutionPolicy policy);

}  // namespace prodis
