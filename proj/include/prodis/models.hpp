#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "prodis/measure.hpp"
#include "prodis/rng.hpp"

namespace prodis {

// First sampling stage: the hidden sequence of per-coordinate laws.
struct LatentPath {
  std::string model_id;
  std::vector<Measure> measures;

  std::size_t horizon() const { return measures.size(); }
};

// Second sampling stage: one point drawn from each latent law.
struct ObservedPath {
  std::string model_id;
  StreamKey key;  // key of the stream that produced the points
  std::vector<double> points;
};

// Draws points[i] from latent.measures[i], one coordinate after another, using
// the given stream.  Point masses consume no randomness.
ObservedPath sample_observed(const LatentPath& latent, RngStream& stream);

// The degenerate disintegration of an observed path: a point mass at every
// observed coordinate.
LatentPath canonical_disintegration(const ObservedPath& path);

// Prefix sums S_0 = 0, S_k = x_0 + ... + x_{k-1} of a +/-1 path obtained from
// a {0,1} path via x = 2b - 1.  Errors on non-binary input.
std::vector<std::int64_t> random_walk_from_bernoulli(const ObservedPath& path);

// ---- parameter sets -------------------------------------------------------

struct PointPrior {
  double value;
};
struct UniformPrior {};
struct TwoPointPrior {
  double a;
  double b;
  double weight_a;
};
using ExchangeablePrior = std::variant<PointPrior, UniformPrior, TwoPointPrior>;

std::string prior_id(const ExchangeablePrior& prior);
void validate_prior(const ExchangeablePrior& prior);

// Two-regime hidden Markov modulation.  Regime 0 carries mu, regime 1 carries
// lambda; both are laws on {-1, +1} given by their mass at +1, and mu1 >
// lambda1 is required so the regimes are distinguishable.  The stationary
// vector must satisfy pi * Q = pi within 1e-10 (supply it explicitly for
// reducible Q; see regime_params_with_stationary for the irreducible case).
struct RegimeParams {
  double mu1 = 0.0;
  double lambda1 = 0.0;
  std::array<std::array<double, 2>, 2> transition{};
  std::array<double, 2> stationary{};

  void validate() const;
};

// Log-volatility recursion H_t = alpha + beta * H_{t-1} + W_t with W uniform
// on [-w_half_width, w_half_width], observation X_t = exp(H_t / 2) * Z_t with
// Z uniform on [-z_half_width, z_half_width].  H_0 is drawn from its
// stationary law truncated to truncation_depth terms of the moving-average
// series; the discarded tail must be at most 1e-10 in absolute value.
struct SVParams {
  double alpha = 0.0;
  double beta = 0.9;
  double w_half_width = 0.5;
  double z_half_width = 1.0;
  int truncation_depth = 0;  // 0 means: choose automatically

  static int auto_truncation_depth(double beta, double w_half_width);
  void validate() const;
  double stationary_mean() const { return alpha / (1.0 - beta); }
  // Largest |H_t| reachable from the truncated stationary start.
  double h_bound() const;
};

// ---- models ---------------------------------------------------------------

class Model {
 public:
  virtual ~Model() = default;

  const std::string& id() const { return id_; }
  // Ordered state list for finite-state models, nullptr for continuous ones.
  virtual const std::vector<double>* states() const { return nullptr; }
  virtual LatentPath sample_latent(std::size_t n, RngStream& stream) const = 0;
  virtual bool is_canonical() const { return false; }

 protected:
  explicit Model(std::string id) : id_(std::move(id)) {}

 private:
  std::string id_;
};

// xi_i = Bernoulli(theta_i) on {0,1} with theta_i iid uniform on [0,1].
class IidUniformBernoulli final : public Model {
 public:
  IidUniformBernoulli();
  const std::vector<double>* states() const override;
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
};

// Increment laws on {-1,+1}: xi_i({+1}) = theta_i, theta_i iid uniform.
class RandomWalkIncrements final : public Model {
 public:
  RandomWalkIncrements();
  const std::vector<double>* states() const override;
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
};

// One theta drawn from the prior, then xi_i = Bernoulli(theta) for every i.
class ExchangeableBernoulli final : public Model {
 public:
  explicit ExchangeableBernoulli(ExchangeablePrior prior);
  const std::vector<double>* states() const override;
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
  const ExchangeablePrior& prior() const { return prior_; }

 private:
  ExchangeablePrior prior_;
};

// Hidden two-state Markov chain selecting between mu and lambda each step.
class RegimeSwitching final : public Model {
 public:
  explicit RegimeSwitching(RegimeParams params);
  const std::vector<double>* states() const override;
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
  const RegimeParams& params() const { return params_; }

 private:
  RegimeParams params_;
};

// theta_0 = U_0 / 2, theta_i = theta_{i-1} + 2^{-(i+1)} U_i: an almost surely
// convergent submartingale of coin biases on {0,1}.
class SubmartingaleCoin final : public Model {
 public:
  SubmartingaleCoin();
  const std::vector<double>* states() const override;
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
};

// Latent law i is the pushforward of Z by exp(H_i / 2) (continuous state).
class StochasticVolatility final : public Model {
 public:
  explicit StochasticVolatility(SVParams params);
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
  const SVParams& params() const { return params_; }

 private:
  SVParams params_;
};

// Wraps a base model: runs both of its stages on the latent-stage stream and
// reports the canonical disintegration (point masses at the realized path) as
// the latent path.  Observationally identical to the base model; the latent
// statistics differ.
class CanonicalModel final : public Model {
 public:
  explicit CanonicalModel(std::shared_ptr<const Model> base);
  const std::vector<double>* states() const override;
  LatentPath sample_latent(std::size_t n, RngStream& stream) const override;
  bool is_canonical() const override { return true; }
  const Model& base() const { return *base_; }

 private:
  std::shared_ptr<const Model> base_;
};

// ---- two-stage driver ------------------------------------------------------

struct PathPair {
  LatentPath latent;
  ObservedPath observed;
};

// Stage one on (seed, replication, substream 0), stage two on
// (seed, replication, substream 1).
PathPair sample_two_stage(const Model& model, std::size_t n, std::uint64_t seed,
                          std::uint64_t replication);

}  // namespace prodis
