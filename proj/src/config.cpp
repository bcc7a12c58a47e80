#include "prodis/config.hpp"

#include <algorithm>
#include <set>

#include "prodis/errors.hpp"
#include "prodis/io.hpp"
#include "prodis/oracle.hpp"
#include "prodis/slln.hpp"

namespace prodis::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) { throw ConfigError(message); }

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where + ": missing required key '" + key + "'");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_string()) bad(where + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_number()) bad(where + ": key '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) bad(where + ": key '" + key + "' must be a number");
  return it->get<double>();
}

std::size_t unsigned_or(const json& obj, const std::string& key, std::size_t fallback,
                        const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
    bad(where + ": key '" + key + "' must be a nonnegative integer");
  }
  return it->get<std::size_t>();
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      bad(where + ": unknown key '" + item.key() + "'");
    }
  }
}

json normalize_prior(const json& block) {
  if (!block.is_object()) bad("prior: must be an object");
  std::string id = require_string(block, "id", "prior");
  json out;
  out["id"] = id;
  if (id == "point") {
    reject_unknown_keys(block, {"id", "value"}, "prior");
    out["value"] = require_number(block, "value", "prior");
  } else if (id == "uniform") {
    reject_unknown_keys(block, {"id"}, "prior");
  } else if (id == "two_point") {
    reject_unknown_keys(block, {"id", "a", "b", "weight_a"}, "prior");
    out["a"] = require_number(block, "a", "prior");
    out["b"] = require_number(block, "b", "prior");
    out["weight_a"] = number_or(block, "weight_a", 0.5, "prior");
  } else {
    bad("prior: unknown prior id '" + id + "'");
  }
  return out;
}

ExchangeablePrior prior_from_json(const json& block) {
  std::string id = block.at("id").get<std::string>();
  if (id == "point") return PointPrior{block.at("value").get<double>()};
  if (id == "uniform") return UniformPrior{};
  return TwoPointPrior{block.at("a").get<double>(), block.at("b").get<double>(),
                       block.at("weight_a").get<double>()};
}

json normalize_model(const json& block, int depth) {
  if (depth > 1) bad("model: canonical wrapper cannot be nested");
  if (!block.is_object()) bad("model: must be an object");
  std::string id = require_string(block, "id", "model");
  json out;
  out["id"] = id;
  if (id == "iid_uniform_bernoulli" || id == "random_walk" || id == "submartingale_coin") {
    reject_unknown_keys(block, {"id"}, "model");
  } else if (id == "exchangeable_bernoulli") {
    reject_unknown_keys(block, {"id", "prior"}, "model");
    out["prior"] = normalize_prior(require_key(block, "prior", "model"));
  } else if (id == "regime_switching") {
    reject_unknown_keys(block, {"id", "mu1", "lambda1", "transition", "stationary"}, "model");
    out["mu1"] = require_number(block, "mu1", "model");
    out["lambda1"] = require_number(block, "lambda1", "model");
    const json& q = require_key(block, "transition", "model");
    if (!q.is_array() || q.size() != 2 || !q[0].is_array() || !q[1].is_array() ||
        q[0].size() != 2 || q[1].size() != 2) {
      bad("model: 'transition' must be a 2x2 array");
    }
    std::array<std::array<double, 2>, 2> transition{};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        if (!q[r][c].is_number()) bad("model: 'transition' entries must be numbers");
        transition[r][c] = q[r][c].get<double>();
      }
    }
    out["transition"] = q;
    auto it = block.find("stationary");
    if (it != block.end()) {
      if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        bad("model: 'stationary' must be a 2-vector of numbers");
      }
      out["stationary"] = *it;
    } else {
      // Derive pi from the transition matrix (errors for reducible chains).
      std::array<double, 2> pi = oracle::stationary_vector(transition);
      out["stationary"] = json::array({pi[0], pi[1]});
    }
  } else if (id == "stochastic_volatility") {
    reject_unknown_keys(
        block, {"id", "alpha", "beta", "w_half_width", "z_half_width", "truncation_depth"},
        "model");
    SVParams params;
    params.alpha = number_or(block, "alpha", 0.0, "model");
    params.beta = number_or(block, "beta", 0.9, "model");
    params.w_half_width = number_or(block, "w_half_width", 0.5, "model");
    params.z_half_width = number_or(block, "z_half_width", 1.0, "model");
    params.truncation_depth =
        static_cast<int>(unsigned_or(block, "truncation_depth", 0, "model"));
    out["alpha"] = params.alpha;
    out["beta"] = params.beta;
    out["w_half_width"] = params.w_half_width;
    out["z_half_width"] = params.z_half_width;
    // Echo the depth the model will actually use.
    out["truncation_depth"] = StochasticVolatility(params).params().truncation_depth;
  } else if (id == "canonical") {
    reject_unknown_keys(block, {"id", "base"}, "model");
    out["base"] = normalize_model(require_key(block, "base", "model"), depth + 1);
  } else {
    bad("model: unknown model id '" + id + "'");
  }
  return out;
}

json normalize_observable(const json& block) {
  if (!block.is_object()) bad("observable: must be an object");
  std::string id = require_string(block, "id", "observable");
  json out;
  out["id"] = id;
  if (id == "indicator") {
    reject_unknown_keys(block, {"id", "at"}, "observable");
    out["at"] = number_or(block, "at", 1.0, "observable");
  } else if (id == "identity" || id == "square") {
    reject_unknown_keys(block, {"id"}, "observable");
  } else if (id == "constant") {
    reject_unknown_keys(block, {"id", "value"}, "observable");
    out["value"] = require_number(block, "value", "observable");
  } else if (id == "piecewise_linear") {
    reject_unknown_keys(block, {"id", "x", "y"}, "observable");
    const json& xs = require_key(block, "x", "observable");
    const json& ys = require_key(block, "y", "observable");
    if (!xs.is_array() || !ys.is_array()) bad("observable: 'x' and 'y' must be arrays");
    for (const auto& v : xs) {
      if (!v.is_number()) bad("observable: 'x' entries must be numbers");
    }
    for (const auto& v : ys) {
      if (!v.is_number()) bad("observable: 'y' entries must be numbers");
    }
    out["x"] = xs;
    out["y"] = ys;
  } else {
    bad("observable: unknown observable id '" + id + "'");
  }
  return out;
}

const std::set<std::string>& allowed_top_level_keys() {
  static const std::set<std::string> keys = {
      "experiment", "model",     "observable", "horizon",   "checkpoints", "replications",
      "seed",       "strict",    "engine",     "reference", "tolerance",   "threshold",
      "gap_decay",
  };
  return keys;
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "trace") return ExperimentKind::Trace;
  if (name == "gap_decay") return ExperimentKind::GapDecay;
  if (name == "hoeffding") return ExperimentKind::Hoeffding;
  if (name == "tail_decomposition") return ExperimentKind::TailDecomposition;
  if (name == "figure_data") return ExperimentKind::FigureData;
  if (name == "sv_functional") return ExperimentKind::SvFunctional;
  bad("experiment: unknown kind '" + name + "'");
}

std::size_t default_horizon(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::FigureData:
      return 21;
    case ExperimentKind::SvFunctional:
      return 20000;
    default:
      return 100000;
  }
}

std::size_t default_replications(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Trace:
      return 1;
    case ExperimentKind::GapDecay:
      return 50;
    case ExperimentKind::Hoeffding:
    case ExperimentKind::TailDecomposition:
      return 10000;
    case ExperimentKind::FigureData:
      return 1;
    case ExperimentKind::SvFunctional:
      return 100;
  }
  return 1;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Trace:
      return "trace";
    case ExperimentKind::GapDecay:
      return "gap_decay";
    case ExperimentKind::Hoeffding:
      return "hoeffding";
    case ExperimentKind::TailDecomposition:
      return "tail_decomposition";
    case ExperimentKind::FigureData:
      return "figure_data";
    case ExperimentKind::SvFunctional:
      return "sv_functional";
  }
  return "unknown";
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) bad("config: top level must be a JSON object");
  reject_unknown_keys(doc, allowed_top_level_keys(), "config");

  ExperimentConfig config;
  config.experiment = experiment_from_name(require_string(doc, "experiment", "config"));

  // Model block; figure_data and sv_functional know their model family.
  auto model_it = doc.find("model");
  if (model_it != doc.end()) {
    config.model = normalize_model(*model_it, 0);
  } else if (config.experiment == ExperimentKind::FigureData) {
    config.model = normalize_model(json{{"id", "submartingale_coin"}}, 0);
  } else if (config.experiment == ExperimentKind::SvFunctional) {
    config.model = normalize_model(json{{"id", "stochastic_volatility"}}, 0);
  } else {
    bad("config: missing required key 'model'");
  }
  if (config.experiment == ExperimentKind::FigureData &&
      config.model.at("id").get<std::string>() != "submartingale_coin") {
    bad("config: figure_data requires the submartingale_coin model");
  }
  if (config.experiment == ExperimentKind::SvFunctional &&
      config.model.at("id").get<std::string>() != "stochastic_volatility") {
    bad("config: sv_functional requires the stochastic_volatility model");
  }

  auto obs_it = doc.find("observable");
  if (obs_it != doc.end()) {
    config.observable = normalize_observable(*obs_it);
  } else if (config.experiment == ExperimentKind::SvFunctional) {
    config.observable = normalize_observable(json{{"id", "square"}});
  } else {
    config.observable = normalize_observable(json{{"id", "indicator"}, {"at", 1.0}});
  }

  bool threshold_kind = config.experiment == ExperimentKind::Hoeffding ||
                        config.experiment == ExperimentKind::TailDecomposition;
  auto threshold_it = doc.find("threshold");
  if (threshold_it != doc.end()) {
    if (!threshold_kind) bad("config: 'threshold' only applies to hoeffding/tail_decomposition");
    if (!threshold_it->is_object()) bad("config: 'threshold' must be an object");
    reject_unknown_keys(*threshold_it, {"n", "t"}, "threshold");
    config.threshold.n = unsigned_or(*threshold_it, "n", config.threshold.n, "threshold");
    config.threshold.t = number_or(*threshold_it, "t", config.threshold.t, "threshold");
  } else if (threshold_kind) {
    bad("config: missing required key 'threshold'");
  }

  auto gap_it = doc.find("gap_decay");
  if (gap_it != doc.end()) {
    if (config.experiment != ExperimentKind::GapDecay) {
      bad("config: 'gap_decay' only applies to gap_decay experiments");
    }
    if (!gap_it->is_object()) bad("config: 'gap_decay' must be an object");
    reject_unknown_keys(*gap_it, {"decay_factor", "floor"}, "gap_decay");
    config.gap_decay.decay_factor =
        number_or(*gap_it, "decay_factor", config.gap_decay.decay_factor, "gap_decay");
    config.gap_decay.floor = number_or(*gap_it, "floor", config.gap_decay.floor, "gap_decay");
  }

  if (threshold_kind) {
    // The horizon is determined by threshold.n; an explicit key may only agree.
    std::size_t given = unsigned_or(doc, "horizon", config.threshold.n, "config");
    if (given != config.threshold.n) {
      bad("config: 'horizon' contradicts threshold.n; drop the key");
    }
    config.horizon = config.threshold.n;
  } else {
    config.horizon = unsigned_or(doc, "horizon", default_horizon(config.experiment), "config");
  }
  if (config.horizon == 0) bad("config: 'horizon' must be positive");

  auto cp_it = doc.find("checkpoints");
  if (cp_it != doc.end()) {
    if (!cp_it->is_array() || cp_it->empty()) bad("config: 'checkpoints' must be a nonempty array");
    for (const auto& v : *cp_it) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() > 0)) {
        bad("config: 'checkpoints' entries must be positive integers");
      }
      config.checkpoints.push_back(v.get<std::size_t>());
    }
  } else {
    config.checkpoints = slln::default_checkpoints(config.horizon);
  }

  config.replications =
      unsigned_or(doc, "replications", default_replications(config.experiment), "config");
  if (config.replications == 0) bad("config: 'replications' must be positive");

  auto seed_it = doc.find("seed");
  if (seed_it != doc.end()) {
    if (seed_it->is_string()) {
      try {
        config.seed = parse_seed(seed_it->get<std::string>());
      } catch (const std::invalid_argument& e) {
        bad(std::string("config: ") + e.what());
      }
    } else if (seed_it->is_number_unsigned()) {
      config.seed = seed_it->get<std::uint64_t>();
    } else {
      bad("config: 'seed' must be a nonnegative integer or a decimal/0x-hex string");
    }
  }

  auto strict_it = doc.find("strict");
  if (strict_it != doc.end()) {
    if (!strict_it->is_boolean()) bad("config: 'strict' must be a boolean");
    config.strict = strict_it->get<bool>();
  }

  auto engine_it = doc.find("engine");
  if (engine_it != doc.end()) {
    if (!engine_it->is_string()) bad("config: 'engine' must be a string");
    std::string engine = engine_it->get<std::string>();
    if (engine == "serial") {
      config.engine = ExecutionPolicy::Serial;
    } else if (engine == "parallel") {
      config.engine = ExecutionPolicy::Parallel;
    } else {
      bad("config: 'engine' must be 'serial' or 'parallel'");
    }
  }

  auto ref_it = doc.find("reference");
  if (ref_it != doc.end()) {
    if (!ref_it->is_string()) bad("config: 'reference' must be a string");
    config.reference = ref_it->get<std::string>();
    if (!config.reference.empty()) {
      if (config.reference != "regime_ergodic_limit") {
        bad("config: unknown reference '" + config.reference + "'");
      }
      if (config.experiment != ExperimentKind::Trace ||
          config.model.at("id").get<std::string>() != "regime_switching") {
        bad("config: reference 'regime_ergodic_limit' needs a regime_switching trace");
      }
    }
  }

  config.tolerance = number_or(doc, "tolerance", config.tolerance, "config");
  if (!(config.tolerance > 0.0)) bad("config: 'tolerance' must be positive");

  // Instantiate once so invariant violations surface at validation time.
  make_model(config.model);
  make_observable(config.observable);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("config: invalid JSON in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

json effective_config(const ExperimentConfig& config) {
  json doc;
  doc["experiment"] = experiment_name(config.experiment);
  doc["model"] = config.model;
  doc["observable"] = config.observable;
  doc["horizon"] = config.horizon;
  doc["checkpoints"] = config.checkpoints;
  doc["replications"] = config.replications;
  doc["seed"] = config.seed;
  doc["strict"] = config.strict;
  doc["engine"] = config.engine == ExecutionPolicy::Serial ? "serial" : "parallel";
  doc["reference"] = config.reference;
  doc["tolerance"] = config.tolerance;
  if (config.experiment == ExperimentKind::Hoeffding ||
      config.experiment == ExperimentKind::TailDecomposition) {
    doc["threshold"] = json{{"n", config.threshold.n}, {"t", config.threshold.t}};
  }
  if (config.experiment == ExperimentKind::GapDecay) {
    doc["gap_decay"] = json{{"decay_factor", config.gap_decay.decay_factor},
                            {"floor", config.gap_decay.floor}};
  }
  return doc;
}

std::shared_ptr<Model> make_model(const json& block) {
  std::string id = block.at("id").get<std::string>();
  if (id == "iid_uniform_bernoulli") return std::make_shared<IidUniformBernoulli>();
  if (id == "random_walk") return std::make_shared<RandomWalkIncrements>();
  if (id == "submartingale_coin") return std::make_shared<SubmartingaleCoin>();
  if (id == "exchangeable_bernoulli") {
    return std::make_shared<ExchangeableBernoulli>(prior_from_json(block.at("prior")));
  }
  if (id == "regime_switching") {
    RegimeParams params;
    params.mu1 = block.at("mu1").get<double>();
    params.lambda1 = block.at("lambda1").get<double>();
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        params.transition[r][c] = block.at("transition")[r][c].get<double>();
      }
    }
    params.stationary[0] = block.at("stationary")[0].get<double>();
    params.stationary[1] = block.at("stationary")[1].get<double>();
    return std::make_shared<RegimeSwitching>(params);
  }
  if (id == "stochastic_volatility") {
    SVParams params;
    params.alpha = block.at("alpha").get<double>();
    params.beta = block.at("beta").get<double>();
    params.w_half_width = block.at("w_half_width").get<double>();
    params.z_half_width = block.at("z_half_width").get<double>();
    params.truncation_depth = block.at("truncation_depth").get<int>();
    return std::make_shared<StochasticVolatility>(params);
  }
  if (id == "canonical") {
    return std::make_shared<CanonicalModel>(make_model(block.at("base")));
  }
  bad("model: unknown model id '" + id + "'");
}

Observable make_observable(const json& block) {
  std::string id = block.at("id").get<std::string>();
  if (id == "indicator") return Observable::indicator_at(block.at("at").get<double>());
  if (id == "identity") return Observable::identity();
  if (id == "square") return Observable::square();
  if (id == "constant") return Observable::constant(block.at("value").get<double>());
  if (id == "piecewise_linear") {
    return Observable::piecewise_linear(block.at("x").get<std::vector<double>>(),
                                        block.at("y").get<std::vector<double>>());
  }
  bad("observable: unknown observable id '" + id + "'");
}

std::string model_catalogue() {
  return
      "iid_uniform_bernoulli   states {0,1}; coordinate i is Bernoulli(theta_i), theta_i iid "
      "uniform on [0,1]\n"
      "random_walk             states {-1,+1}; increment laws with mass theta_i at +1, theta_i "
      "iid uniform\n"
      "exchangeable_bernoulli  states {0,1}; one theta from a prior (point|uniform|two_point), "
      "then Bernoulli(theta) forever\n"
      "regime_switching        states {-1,+1}; hidden two-state Markov chain picks between "
      "emission laws mu and lambda\n"
      "submartingale_coin      states {0,1}; coin bias theta_i = theta_{i-1} + 2^-(i+1) U_i "
      "rises to a random limit\n"
      "stochastic_volatility   continuous; X_t = exp(H_t/2) Z_t with an AR(1) log-volatility "
      "H_t and uniform innovations\n"
      "canonical               wrapper {\"id\":\"canonical\",\"base\":{...}}; reports point "
      "masses at the realized path as the latent laws\n";
}

}  // namespace prodis::cli
