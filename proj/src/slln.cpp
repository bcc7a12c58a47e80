#include "prodis/slln.hpp"

#include <algorithm>
#include <cmath>

#include "prodis/compensated.hpp"
#include "prodis/errors.hpp"

namespace prodis::slln {

namespace {

void validate_checkpoints(const std::vector<std::size_t>& checkpoints, std::size_t horizon) {
  if (checkpoints.empty()) throw InvariantViolation("no checkpoints requested");
  std::size_t prev = 0;
  for (std::size_t n : checkpoints) {
    if (n <= prev) throw InvariantViolation("checkpoints must be strictly increasing and positive");
    prev = n;
  }
  if (checkpoints.back() > horizon) {
    throw InvariantViolation("checkpoint beyond the horizon");
  }
}

bool is_power_of_ten(std::size_t n) {
  if (n == 0) return false;
  std::size_t p = 1;
  while (p < n) {
    if (p > n / 10) return false;
    p *= 10;
  }
  return p == n;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

double sample_std_error(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  double mean = sum.value() / static_cast<double>(values.size());
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  double var = sq.value() / static_cast<double>(values.size() - 1);
  return std::sqrt(var / static_cast<double>(values.size()));
}

bool stabilized(const ConvergenceTrace& trace, bool use_fx, double tol) {
  if (trace.checkpoints.size() < 2) {
    throw InvariantViolation("stabilization needs at least two checkpoints");
  }
  const auto& a = trace.checkpoints[trace.checkpoints.size() - 2];
  const auto& b = trace.checkpoints.back();
  double delta = use_fx ? b.mean_fx - a.mean_fx : b.mean_xif - a.mean_xif;
  return std::abs(delta) < tol;
}

}  // namespace

std::vector<std::size_t> default_checkpoints(std::size_t horizon) {
  if (horizon == 0) throw InvariantViolation("horizon must be positive");
  std::vector<std::size_t> out;
  for (std::size_t p = 100; p <= horizon; p *= 10) out.push_back(p);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

ConvergenceTrace run_trace(const Model& model, const Observable& f, std::size_t horizon,
                           const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                           std::uint64_t replication) {
  validate_checkpoints(checkpoints, horizon);
  PathPair pair = sample_two_stage(model, horizon, seed, replication);

  ConvergenceTrace trace;
  trace.model_id = model.id();
  trace.observable_id = f.id();
  trace.seed = seed;
  trace.replication = replication;
  trace.checkpoints.reserve(checkpoints.size());

  CompensatedSum sum_fx;
  CompensatedSum sum_xif;
  std::size_t next = 0;
  for (std::size_t i = 0; i < horizon; ++i) {
    sum_fx.add(f(pair.observed.points[i]));
    sum_xif.add(integrate(pair.latent.measures[i], f));
    if (i + 1 == checkpoints[next]) {
      TraceCheckpoint cp;
      cp.n = i + 1;
      double n = static_cast<double>(cp.n);
      cp.mean_fx = sum_fx.value() / n;
      cp.mean_xif = sum_xif.value() / n;
      cp.gap = cp.mean_fx - cp.mean_xif;
      trace.checkpoints.push_back(cp);
      if (++next == checkpoints.size()) break;
    }
  }
  return trace;
}

std::vector<ConvergenceTrace> run_traces(const Model& model, const Observable& f,
                                         std::size_t horizon,
                                         const std::vector<std::size_t>& checkpoints,
                                         std::uint64_t seed, std::size_t count,
                                         ExecutionPolicy policy) {
  if (count == 0) throw InvariantViolation("need at least one replication");
  std::vector<ConvergenceTrace> traces(count);
  for_each_replication(count, policy, [&](std::size_t r) {
    traces[r] = run_trace(model, f, horizon, checkpoints, seed, r);
  });
  return traces;
}

GapDecayReport gap_decay_check(const std::vector<ConvergenceTrace>& traces, double decay_factor,
                               double floor) {
  if (traces.empty()) throw InvariantViolation("gap_decay_check needs traces");
  if (!(decay_factor > 0.0 && decay_factor < 1.0)) {
    throw InvariantViolation("decay factor must lie in (0,1)");
  }
  if (!(floor > 0.0)) throw InvariantViolation("floor must be positive");
  const ConvergenceTrace& first = traces.front();
  for (const auto& t : traces) {
    if (t.model_id != first.model_id || t.observable_id != first.observable_id) {
      throw InvariantViolation("gap_decay_check traces mix models or observables");
    }
    if (t.checkpoints.size() != first.checkpoints.size()) {
      throw InvariantViolation("gap_decay_check traces disagree on checkpoints");
    }
  }

  GapDecayReport report;
  for (std::size_t k = 0; k < first.checkpoints.size(); ++k) {
    std::size_t n = first.checkpoints[k].n;
    if (!is_power_of_ten(n)) continue;
    std::vector<double> gaps;
    gaps.reserve(traces.size());
    for (const auto& t : traces) {
      if (t.checkpoints[k].n != n) {
        throw InvariantViolation("gap_decay_check traces disagree on checkpoints");
      }
      gaps.push_back(std::abs(t.checkpoints[k].gap));
    }
    report.decade_ns.push_back(n);
    report.decade_medians.push_back(median_of(std::move(gaps)));
  }

  if (report.decade_ns.size() < 3) {
    throw InvariantViolation("gap_decay_check needs at least three power-of-ten checkpoints");
  }
  for (std::size_t k = 1; k < report.decade_ns.size(); ++k) {
    if (report.decade_ns[k] != report.decade_ns[k - 1] * 10) {
      throw InvariantViolation("power-of-ten checkpoints must be consecutive decades");
    }
  }

  report.pass = true;
  for (std::size_t k = 1; k < report.decade_ns.size(); ++k) {
    double allowed = std::max(decay_factor * report.decade_medians[k - 1], floor);
    if (report.decade_medians[k] > allowed) {
      report.pass = false;
      report.violations.push_back(
          "median |gap| at n=" + std::to_string(report.decade_ns[k]) + " is " +
          std::to_string(report.decade_medians[k]) + ", above the allowed " +
          std::to_string(allowed));
    }
  }
  return report;
}

bool stabilized_mean_fx(const ConvergenceTrace& trace, double tol) {
  return stabilized(trace, true, tol);
}

bool stabilized_mean_xif(const ConvergenceTrace& trace, double tol) {
  return stabilized(trace, false, tol);
}

SubmartingaleEstimate submartingale_limit_estimate(const ConvergenceTrace& trace,
                                                   const LatentPath& latent) {
  if (latent.model_id != "submartingale_coin") {
    throw InvariantViolation("submartingale_limit_estimate needs a submartingale_coin path");
  }
  if (latent.measures.empty()) throw InvariantViolation("empty latent path");
  const auto* last = std::get_if<FiniteMeasure>(&latent.measures.back());
  if (last == nullptr) throw InvariantViolation("unexpected latent measure type");
  SubmartingaleEstimate est;
  est.theta_terminal = last->mass_at(1.0);
  est.terminal_mean_fx = trace.terminal().mean_fx;
  est.difference = est.terminal_mean_fx - est.theta_terminal;
  return est;
}

SvFunctionalEstimate sv_functional_estimate(const SVParams& params, const Observable& f,
                                            std::size_t horizon, std::uint64_t seed,
                                            std::size_t replications, ExecutionPolicy policy) {
  if (replications < 2) throw InvariantViolation("need at least two path replications");
  if (horizon == 0) throw InvariantViolation("horizon must be positive");
  StochasticVolatility model(params);

  std::vector<double> path_means(replications);
  for_each_replication(replications, policy, [&](std::size_t r) {
    PathPair pair = sample_two_stage(model, horizon, seed, r);
    CompensatedSum acc;
    for (double x : pair.observed.points) acc.add(f(x));
    path_means[r] = acc.value() / static_cast<double>(horizon);
  });

  // One-coordinate latent draws: measures[0] is the time-zero observation law
  // with H_0 from the truncated stationary start, so integrating f against it
  // is exactly one draw of the limiting functional.
  std::vector<double> direct_values(kSvDirectDraws);
  for_each_replication(kSvDirectDraws, policy, [&](std::size_t j) {
    RngStream stream(StreamKey{seed, replications + j, 0});
    LatentPath one = model.sample_latent(1, stream);
    direct_values[j] = integrate(one.measures[0], f);
  });

  SvFunctionalEstimate est;
  est.replications = replications;
  est.direct_draws = kSvDirectDraws;
  CompensatedSum path_sum;
  for (double v : path_means) path_sum.add(v);
  est.path_average = path_sum.value() / static_cast<double>(replications);
  est.path_std_error = sample_std_error(path_means);
  CompensatedSum direct_sum;
  for (double v : direct_values) direct_sum.add(v);
  est.direct_average = direct_sum.value() / static_cast<double>(kSvDirectDraws);
  est.direct_std_error = sample_std_error(direct_values);
  return est;
}

}  // namespace prodis::slln
