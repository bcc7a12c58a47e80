#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodis/exec.hpp"
#include "prodis/measure.hpp"
#include "prodis/models.hpp"

namespace prodis::slln {

struct TraceCheckpoint {
  std::size_t n = 0;       // number of steps accumulated (coordinates 0..n-1)
  double mean_fx = 0.0;    // (1/n) sum f(X_i)
  double mean_xif = 0.0;   // (1/n) sum xi_i(f)
  double gap = 0.0;        // mean_fx - mean_xif, the quantity driven to zero
};

struct ConvergenceTrace {
  std::string model_id;
  std::string observable_id;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::vector<TraceCheckpoint> checkpoints;

  const TraceCheckpoint& terminal() const { return checkpoints.back(); }
};

// Powers of ten from 100 up to the horizon, with the horizon itself appended
// when it is not a power of ten.  Horizons below 100 yield just {horizon}.
std::vector<std::size_t> default_checkpoints(std::size_t horizon);

// Runs both sampling stages for one replication and accumulates the running
// means of f(X_i) and xi_i(f) with compensated summation, recording them at
// each checkpoint.  Checkpoints must be strictly increasing and end at or
// below the horizon.
ConvergenceTrace run_trace(const Model& model, const Observable& f, std::size_t horizon,
                           const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                           std::uint64_t replication);

// Replications 0..count-1 under the given engine; output order is by
// replication index regardless of the policy.
std::vector<ConvergenceTrace> run_traces(const Model& model, const Observable& f,
                                         std::size_t horizon,
                                         const std::vector<std::size_t>& checkpoints,
                                         std::uint64_t seed, std::size_t count,
                                         ExecutionPolicy policy);

struct GapDecayReport {
  bool pass = false;
  std::vector<std::size_t> decade_ns;       // power-of-ten checkpoints used
  std::vector<double> decade_medians;       // median |gap| across traces
  std::vector<std::string> violations;
};

// Decade-decay guard: at consecutive power-of-ten checkpoints the median
// absolute gap must fall to at most decay_factor times the previous level, or
// below an absolute floor.  Needs at least three consecutive power-of-ten
// checkpoints shared by all traces.
GapDecayReport gap_decay_check(const std::vector<ConvergenceTrace>& traces,
                               double decay_factor = 0.5, double floor = 1e-3);

// A running mean is "stabilized" when its last two checkpoint values differ
// by less than tol.
bool stabilized_mean_fx(const ConvergenceTrace& trace, double tol = 5e-3);
bool stabilized_mean_xif(const ConvergenceTrace& trace, double tol = 5e-3);

struct SubmartingaleEstimate {
  double theta_terminal = 0.0;   // last coin bias on the latent path
  double terminal_mean_fx = 0.0; // running mean of the coin outcomes
  double difference = 0.0;
};

// Pairs the terminal bias of a submartingale-coin latent path with the
// terminal running mean of its observed outcomes.
SubmartingaleEstimate submartingale_limit_estimate(const ConvergenceTrace& trace,
                                                   const LatentPath& latent);

struct SvFunctionalEstimate {
  double path_average = 0.0;      // across-replication mean of per-path means
  double path_std_error = 0.0;
  double direct_average = 0.0;    // direct Monte Carlo over the time-zero law
  double direct_std_error = 0.0;
  std::size_t replications = 0;
  std::size_t direct_draws = 0;
};

inline constexpr std::size_t kSvDirectDraws = 100000;

// Two estimators of the same ergodic limit for the stochastic-volatility
// model: long-run path averages of f(X_t), and direct draws of the integral
// of f against the time-zero observation law.  Path replications use stream
// ids 0..replications-1; direct draws use ids replications.. so the two sides
// never share a stream.
SvFunctionalEstimate sv_functional_estimate(const SVParams& params, const Observable& f,
                                            std::size_t horizon, std::uint64_t seed,
                                            std::size_t replications, ExecutionPolicy policy);

}  // namespace prodis::slln
