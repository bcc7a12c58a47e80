#include "prodis/mc.hpp"

#include <algorithm>
#include <cmath>

#include "prodis/errors.hpp"

namespace prodis {

namespace {

FrequencyEstimate finish(std::size_t hits, std::size_t replications) {
  FrequencyEstimate est;
  est.hits = hits;
  est.replications = replications;
  est.frequency = static_cast<double>(hits) / static_cast<double>(replications);
  est.std_error =
      std::sqrt(est.frequency * (1.0 - est.frequency) / static_cast<double>(replications));
  return est;
}

}  // namespace

FrequencyEstimate mc_cylinder_frequency(const Model& model, const oracle::CylinderEvent& event,
                                        std::size_t replications, std::uint64_t seed,
                                        ExecutionPolicy policy) {
  return mc_cylinder_frequencies(model, {event}, replications, seed, policy).front();
}

std::vector<FrequencyEstimate> mc_cylinder_frequencies(
    const Model& model, const std::vector<oracle::CylinderEvent>& events,
    std::size_t replications, std::uint64_t seed, ExecutionPolicy policy) {
  if (events.empty()) throw InvariantViolation("no events to estimate");
  if (replications == 0) throw InvariantViolation("need at least one replication");
  std::size_t horizon = 0;
  for (const auto& e : events) horizon = std::max(horizon, e.max_index() + 1);

  // Hit flags per replication, reduced in index order afterwards so the
  // result is independent of the execution policy.
  std::vector<unsigned char> hits(replications * events.size(), 0);
  for_each_replication(replications, policy, [&](std::size_t r) {
    PathPair pair = sample_two_stage(model, horizon, seed, r);
    for (std::size_t k = 0; k < events.size(); ++k) {
      hits[r * events.size() + k] = events[k].holds(pair.observed.points) ? 1 : 0;
    }
  });

  std::vector<FrequencyEstimate> out;
  out.reserve(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) {
    std::size_t total = 0;
    for (std::size_t r = 0; r < replications; ++r) total += hits[r * events.size() + k];
    out.push_back(finish(total, replications));
  }
  return out;
}

}  // namespace prodis
