#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "prodis/config.hpp"
#include "prodis/errors.hpp"
#include "prodis/figure.hpp"
#include "prodis/io.hpp"
#include "prodis/rng.hpp"
#include "prodis/runner.hpp"
#include "prodis/slln.hpp"

namespace {

using nlohmann::json;
using namespace prodis;

void print_error(int code, const std::string& kind, const std::string& message) {
  json err;
  err["error"] = json{{"code", code}, {"kind", kind}, {"message", message}};
  // stderr, so a piped stdout only ever carries run summaries
  std::cerr << err.dump(2) << "\n";
}

// Precedence: --out-dir flag, then config (none today), then environment.
std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PRODIS_OUT_DIR"); env != nullptr && env[0] != '\0') {
    return env;
  }
  return "out";
}

struct Overrides {
  std::string seed;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> horizon;
  bool strict = false;
};

void apply_overrides(cli::ExperimentConfig& config, const Overrides& o) {
  if (!o.seed.empty()) config.seed = parse_seed(o.seed);
  if (o.replications) config.replications = *o.replications;
  if (o.horizon) {
    config.horizon = *o.horizon;
    config.checkpoints = slln::default_checkpoints(config.horizon);
  }
  if (o.strict) config.strict = true;
}

int dispatch(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    print_error(cli::kExitConfig, "config", e.what());
    return cli::kExitConfig;
  } catch (const InvariantViolation& e) {
    print_error(cli::kExitInvariant, "invariant", e.what());
    return cli::kExitInvariant;
  } catch (const std::domain_error& e) {
    print_error(cli::kExitInvariant, "invariant", e.what());
    return cli::kExitInvariant;
  } catch (const CheckFailure& e) {
    print_error(cli::kExitCheckFailed, "check", e.what());
    return cli::kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    print_error(cli::kExitConfig, "config", e.what());
    return cli::kExitConfig;
  } catch (const std::exception& e) {
    print_error(cli::kExitUsage, "internal", e.what());
    return cli::kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification tool for processes driven by latent sequences of "
               "random probability measures"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_flag;
  Overrides overrides;

  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Path to the experiment config")->required();
  run->add_option("--seed", overrides.seed, "Override the seed (decimal or 0x-hex)");
  run->add_option("--reps", overrides.replications, "Override the replication count");
  run->add_option("--horizon", overrides.horizon,
                  "Override the horizon (resets checkpoints to the default ladder)");
  run->add_option("--out-dir", out_dir_flag, "Directory for artifacts (default: $PRODIS_OUT_DIR or ./out)");
  run->add_flag("--strict", overrides.strict, "Exit 4 when a statistical check fails");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Parse a config and echo its effective form");
  validate->add_option("config", validate_path, "Path to the experiment config")->required();

  std::string figure_csv_path;
  std::string figure_out_path;
  CLI::App* figure_cmd = app.add_subcommand("figure", "Render a figure CSV to SVG");
  figure_cmd->add_option("csv", figure_csv_path, "Input CSV (n,theta_n,coin_outcome,running_mean)")
      ->required();
  figure_cmd->add_option("out", figure_out_path, "Output SVG path")->required();

  CLI::App* list_models = app.add_subcommand("list-models", "Describe the available models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (run->parsed()) {
    return dispatch([&] {
      cli::ExperimentConfig config = cli::load_config(config_path);
      apply_overrides(config, overrides);
      cli::RunResult result = cli::run_experiment(config, resolve_out_dir(out_dir_flag));
      json summary;
      summary["experiment"] = cli::experiment_name(config.experiment);
      summary["checks_passed"] = result.checks_passed;
      summary["artifacts"] = result.artifacts;
      std::cout << summary.dump(2) << "\n";
      return cli::kExitOk;
    });
  }
  if (validate->parsed()) {
    return dispatch([&] {
      cli::ExperimentConfig config = cli::load_config(validate_path);
      std::cout << cli::effective_config(config).dump(2) << "\n";
      return cli::kExitOk;
    });
  }
  if (figure_cmd->parsed()) {
    return dispatch([&] {
      auto series = figure::parse_figure_csv(io::read_file(figure_csv_path));
      io::write_file(figure_out_path, figure::render_figure_svg(series));
      std::cout << "wrote " << figure_out_path << "\n";
      return cli::kExitOk;
    });
  }
  if (list_models->parsed()) {
    std::cout << cli::model_catalogue();
    return cli::kExitOk;
  }
  return cli::kExitUsage;
}
