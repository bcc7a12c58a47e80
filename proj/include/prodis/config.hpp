#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "prodis/exec.hpp"
#include "prodis/measure.hpp"
#include "prodis/models.hpp"

namespace prodis::cli {

// Experiment kinds the runner understands.
enum class ExperimentKind {
  Trace,
  GapDecay,
  Hoeffding,
  TailDecomposition,
  FigureData,
  SvFunctional,
};

std::string experiment_name(ExperimentKind kind);

struct ThresholdBlock {
  std::size_t n = 100;
  double t = 20.0;
};

struct GapDecayBlock {
  double decay_factor = 0.5;
  double floor = 1e-3;
};

// Fully-resolved experiment description.  Parsing fills every default, so the
// echoed form is a fixed point of the parser.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Trace;
  nlohmann::json model;       // normalized model block
  nlohmann::json observable;  // normalized observable block
  std::size_t horizon = 100000;
  std::vector<std::size_t> checkpoints;  // defaulted from the horizon
  std::size_t replications = 1;
  std::uint64_t seed = 20270917;
  bool strict = false;
  ExecutionPolicy engine = ExecutionPolicy::Parallel;
  // Optional reference check for trace runs: "" or "regime_ergodic_limit".
  std::string reference;
  double tolerance = 0.02;
  ThresholdBlock threshold;
  GapDecayBlock gap_decay;
};

// Parses and validates a config document.  Structural problems (bad JSON
// handled upstream, unknown keys/ids, wrong types) throw ConfigError; value
// domain problems surface as InvariantViolation from the model and measure
// constructors.
ExperimentConfig parse_config(const nlohmann::json& doc);

// Reads the file, parses JSON (ConfigError on syntax errors), then parse_config.
ExperimentConfig load_config(const std::string& path);

// The normalized echo: every default filled in, keys in canonical order.
nlohmann::json effective_config(const ExperimentConfig& config);

// Instantiates the model / observable a normalized block describes.
std::shared_ptr<Model> make_model(const nlohmann::json& block);
Observable make_observable(const nlohmann::json& block);

// One-line-per-model catalogue for the list-models command.
std::string model_catalogue();

}  // namespace prodis::cli
