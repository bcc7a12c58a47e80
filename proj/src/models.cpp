#include "prodis/models.hpp"

#include <cmath>
#include <utility>

#include "prodis/errors.hpp"

namespace prodis {

namespace {

const std::vector<double> kBinaryStates{0.0, 1.0};
const std::vector<double> kSignStates{-1.0, 1.0};

void require_horizon(std::size_t n) {
  if (n == 0) throw InvariantViolation("cannot sample an empty path (n = 0)");
}

}  // namespace

ObservedPath sample_observed(const LatentPath& latent, RngStream& stream) {
  if (latent.measures.empty()) throw InvariantViolation("empty latent path");
  ObservedPath path;
  path.model_id = latent.model_id;
  path.key = stream.key();
  path.points.reserve(latent.measures.size());
  for (const Measure& m : latent.measures) {
    path.points.push_back(sample(m, stream));
  }
  return path;
}

LatentPath canonical_disintegration(const ObservedPath& path) {
  LatentPath latent;
  latent.model_id = "canonical(" + path.model_id + ")";
  latent.measures.reserve(path.points.size());
  for (double x : path.points) {
    latent.measures.emplace_back(PointMass(x));
  }
  return latent;
}

std::vector<std::int64_t> random_walk_from_bernoulli(const ObservedPath& path) {
  std::vector<std::int64_t> walk;
  walk.reserve(path.points.size() + 1);
  walk.push_back(0);
  std::int64_t s = 0;
  for (double b : path.points) {
    if (b != 0.0 && b != 1.0) {
      throw InvariantViolation("random_walk_from_bernoulli needs a {0,1} path");
    }
    s += b == 1.0 ? 1 : -1;
    walk.push_back(s);
  }
  return walk;
}

std::string prior_id(const ExchangeablePrior& prior) {
  struct Visitor {
    std::string operator()(const PointPrior& p) const {
      return "point(" + std::to_string(p.value) + ")";
    }
    std::string operator()(const UniformPrior&) const { return "uniform"; }
    std::string operator()(const TwoPointPrior& p) const {
      return "two_point(" + std::to_string(p.a) + "," + std::to_string(p.b) + ")";
    }
  };
  return std::visit(Visitor{}, prior);
}

void validate_prior(const ExchangeablePrior& prior) {
  struct Visitor {
    void operator()(const PointPrior& p) const {
      if (!(p.value >= 0.0 && p.value <= 1.0)) {
        throw InvariantViolation("point prior value outside [0,1]");
      }
    }
    void operator()(const UniformPrior&) const {}
    void operator()(const TwoPointPrior& p) const {
      if (!(p.a >= 0.0 && p.a <= 1.0) || !(p.b >= 0.0 && p.b <= 1.0)) {
        throw InvariantViolation("two_point prior values outside [0,1]");
      }
      if (!(p.a < p.b)) throw InvariantViolation("two_point prior needs a < b");
      if (!(p.weight_a >= 0.0 && p.weight_a <= 1.0)) {
        throw InvariantViolation("two_point prior weight outside [0,1]");
      }
    }
  };
  std::visit(Visitor{}, prior);
}

void RegimeParams::validate() const {
  if (!(mu1 >= 0.0 && mu1 <= 1.0) || !(lambda1 >= 0.0 && lambda1 <= 1.0)) {
    throw InvariantViolation("regime emission masses must lie in [0,1]");
  }
  if (!(mu1 > lambda1)) {
    throw InvariantViolation("regime emissions must satisfy mu1 > lambda1");
  }
  for (int r = 0; r < 2; ++r) {
    double row = 0.0;
    for (int c = 0; c < 2; ++c) {
      if (!(transition[r][c] >= 0.0)) {
        throw InvariantViolation("regime transition entries must be nonnegative");
      }
      row += transition[r][c];
    }
    if (std::abs(row - 1.0) > 1e-12) {
      throw InvariantViolation("regime transition rows must sum to 1 within 1e-12");
    }
  }
  double pi_sum = stationary[0] + stationary[1];
  if (!(stationary[0] >= 0.0) || !(stationary[1] >= 0.0) || std::abs(pi_sum - 1.0) > 1e-12) {
    throw InvariantViolation("regime stationary vector must be a probability vector");
  }
  for (int c = 0; c < 2; ++c) {
    double image = stationary[0] * transition[0][c] + stationary[1] * transition[1][c];
    if (std::abs(image - stationary[c]) > 1e-10) {
      throw InvariantViolation("regime stationary vector does not satisfy pi * Q = pi");
    }
  }
  bool irreducible = transition[0][1] > 0.0 && transition[1][0] > 0.0;
  if (irreducible && !(stationary[0] > 0.0 && stationary[0] < 1.0)) {
    throw InvariantViolation("irreducible regime chain needs interior stationary vector");
  }
}

int SVParams::auto_truncation_depth(double beta, double w_half_width) {
  double b = std::abs(beta);
  int depth = 1;
  // Tail of the moving-average series after K terms: |beta|^{K+1} * w / (1-|beta|).
  while (std::pow(b, depth + 1) * w_half_width / (1.0 - b) > 1e-10) {
    ++depth;
    if (depth > 100000) throw InvariantViolation("volatility truncation depth diverged");
  }
  return depth;
}

void SVParams::validate() const {
  if (!std::isfinite(alpha)) throw InvariantViolation("volatility alpha must be finite");
  if (!(std::abs(beta) < 1.0)) {
    throw InvariantViolation("volatility recursion needs |beta| < 1");
  }
  if (!(w_half_width > 0.0)) throw InvariantViolation("w_half_width must be positive");
  if (!(z_half_width > 0.0)) throw InvariantViolation("z_half_width must be positive");
  if (truncation_depth < 1) throw InvariantViolation("truncation_depth must be >= 1");
  double b = std::abs(beta);
  double tail = std::pow(b, truncation_depth + 1) * w_half_width / (1.0 - b);
  if (tail > 1e-10) {
    throw InvariantViolation("truncation_depth leaves a stationary-series tail above 1e-10");
  }
}

double SVParams::h_bound() const {
  return std::abs(alpha) / (1.0 - std::abs(beta)) + w_half_width / (1.0 - std::abs(beta));
}

IidUniformBernoulli::IidUniformBernoulli() : Model("iid_uniform_bernoulli") {}

const std::vector<double>* IidUniformBernoulli::states() const { return &kBinaryStates; }

LatentPath IidUniformBernoulli::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  LatentPath latent;
  latent.model_id = id();
  latent.measures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    latent.measures.emplace_back(bernoulli_measure(stream.next_uniform()));
  }
  return latent;
}

RandomWalkIncrements::RandomWalkIncrements() : Model("random_walk") {}

const std::vector<double>* RandomWalkIncrements::states() const { return &kSignStates; }

LatentPath RandomWalkIncrements::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  LatentPath latent;
  latent.model_id = id();
  latent.measures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    latent.measures.emplace_back(sign_measure(stream.next_uniform()));
  }
  return latent;
}

ExchangeableBernoulli::ExchangeableBernoulli(ExchangeablePrior prior)
    : Model("exchangeable_bernoulli"), prior_(std::move(prior)) {
  validate_prior(prior_);
}

const std::vector<double>* ExchangeableBernoulli::states() const { return &kBinaryStates; }

LatentPath ExchangeableBernoulli::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  struct Draw {
    RngStream& stream;
    double operator()(const PointPrior& p) const { return p.value; }
    double operator()(const UniformPrior&) const { return stream.next_uniform(); }
    double operator()(const TwoPointPrior& p) const {
      return stream.next_uniform() < p.weight_a ? p.a : p.b;
    }
  };
  double theta = std::visit(Draw{stream}, prior_);
  LatentPath latent;
  latent.model_id = id();
  latent.measures.assign(n, Measure(bernoulli_measure(theta)));
  return latent;
}

RegimeSwitching::RegimeSwitching(RegimeParams params)
    : Model("regime_switching"), params_(params) {
  params_.validate();
}

const std::vector<double>* RegimeSwitching::states() const { return &kSignStates; }

LatentPath RegimeSwitching::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  LatentPath latent;
  latent.model_id = id();
  latent.measures.reserve(n);
  // Regime 0 = mu, regime 1 = lambda; the chain starts from its stationary law.
  int regime = stream.next_uniform() < params_.stationary[0] ? 0 : 1;
  latent.measures.emplace_back(sign_measure(regime == 0 ? params_.mu1 : params_.lambda1));
  for (std::size_t i = 1; i < n; ++i) {
    double stay = params_.transition[regime][regime];
    // With two states, "not stay" determines the move.
    if (!(stream.next_uniform() < stay)) regime = 1 - regime;
    latent.measures.emplace_back(sign_measure(regime == 0 ? params_.mu1 : params_.lambda1));
  }
  return latent;
}

SubmartingaleCoin::SubmartingaleCoin() : Model("submartingale_coin") {}

const std::vector<double>* SubmartingaleCoin::states() const { return &kBinaryStates; }

LatentPath SubmartingaleCoin::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  LatentPath latent;
  latent.model_id = id();
  latent.measures.reserve(n);
  double theta = stream.next_uniform() / 2.0;
  latent.measures.emplace_back(bernoulli_measure(theta));
  double step = 0.25;  // 2^{-(i+1)} for i = 1
  for (std::size_t i = 1; i < n; ++i) {
    theta += step * stream.next_uniform();
    step /= 2.0;
    latent.measures.emplace_back(bernoulli_measure(theta));
  }
  return latent;
}

StochasticVolatility::StochasticVolatility(SVParams params)
    : Model("stochastic_volatility"), params_(params) {
  if (params_.truncation_depth == 0) {
    params_.truncation_depth = SVParams::auto_truncation_depth(params_.beta, params_.w_half_width);
  }
  params_.validate();
}

LatentPath StochasticVolatility::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  const SVParams& p = params_;
  // Stationary start: H_0 = alpha / (1 - beta) + sum_{k=0}^{K} beta^k W_{-k},
  // truncated at K = truncation_depth.  W_{-0} is drawn first.
  double h = p.stationary_mean();
  double coeff = 1.0;
  for (int k = 0; k <= p.truncation_depth; ++k) {
    h += coeff * stream.next_uniform_in(-p.w_half_width, p.w_half_width);
    coeff *= p.beta;
  }
  LatentPath latent;
  latent.model_id = id();
  latent.measures.reserve(n);
  latent.measures.emplace_back(PushforwardMeasure(p.z_half_width, std::exp(h / 2.0)));
  for (std::size_t i = 1; i < n; ++i) {
    h = p.alpha + p.beta * h + stream.next_uniform_in(-p.w_half_width, p.w_half_width);
    latent.measures.emplace_back(PushforwardMeasure(p.z_half_width, std::exp(h / 2.0)));
  }
  return latent;
}

CanonicalModel::CanonicalModel(std::shared_ptr<const Model> base)
    : Model("canonical(" + base->id() + ")"), base_(std::move(base)) {
  if (base_->is_canonical()) {
    throw InvariantViolation("canonical wrapper cannot be nested");
  }
}

const std::vector<double>* CanonicalModel::states() const { return base_->states(); }

LatentPath CanonicalModel::sample_latent(std::size_t n, RngStream& stream) const {
  require_horizon(n);
  // Both base stages run on the single stage-one stream; the realized path
  // then becomes the (degenerate) latent path.
  LatentPath base_latent = base_->sample_latent(n, stream);
  ObservedPath realized = sample_observed(base_latent, stream);
  LatentPath latent = canonical_disintegration(realized);
  latent.model_id = id();
  return latent;
}

PathPair sample_two_stage(const Model& model, std::size_t n, std::uint64_t seed,
                          std::uint64_t replication) {
  RngStream latent_stream(StreamKey{seed, replication, 0});
  RngStream observed_stream(StreamKey{seed, replication, 1});
  PathPair pair;
  pair.latent = model.sample_latent(n, latent_stream);
  pair.observed = sample_observed(pair.latent, observed_stream);
  return pair;
}

}  // namespace prodis
