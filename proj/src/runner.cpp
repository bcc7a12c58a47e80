#include "prodis/runner.hpp"

#include <cmath>
#include <filesystem>

#include "prodis/concentration.hpp"
#include "prodis/errors.hpp"
#include "prodis/figure.hpp"
#include "prodis/io.hpp"
#include "prodis/oracle.hpp"
#include "prodis/slln.hpp"

namespace prodis::cli {

namespace {

using nlohmann::json;

json trace_report(const ExperimentConfig& config,
                  const std::vector<slln::ConvergenceTrace>& traces) {
  json report;
  report["experiment"] = experiment_name(config.experiment);
  report["model"] = traces.front().model_id;
  report["observable"] = traces.front().observable_id;
  report["replications"] = traces.size();
  report["horizon"] = config.horizon;
  json terminal = json::array();
  for (const auto& t : traces) {
    terminal.push_back(json{{"replication", t.replication},
                            {"mean_fX", t.terminal().mean_fx},
                            {"mean_xif", t.terminal().mean_xif},
                            {"gap", t.terminal().gap}});
  }
  report["terminal"] = terminal;
  return report;
}

json hoeffding_report_json(const conc::ConcentrationReport& r) {
  return json{{"n", r.n},
              {"t", r.t},
              {"bound", r.bound},
              {"replications", r.replications},
              {"in_condition", r.in_condition},
              {"exceedances", r.exceedances},
              {"empirical_conditional", r.empirical_conditional},
              {"slack", r.slack},
              {"outcome", conc::outcome_name(r.outcome)},
              {"degenerate", r.degenerate}};
}

json tail_report_json(const conc::TailDecompositionReport& r) {
  return json{{"n", r.n},
              {"t", r.t},
              {"bound", r.bound},
              {"total_tail", r.total_tail},
              {"latent_tail", r.latent_tail},
              {"total_std_error", r.total_std_error},
              {"latent_std_error", r.latent_std_error},
              {"slack", r.slack},
              {"replications", r.replications},
              {"pass", r.pass}};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto path_of = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  RunResult result;
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string path = path_of(name);
    io::write_file(path, content);
    result.artifacts.push_back(path);
  };

  emit("effective_config.json", effective_config(config).dump(2) + "\n");

  std::shared_ptr<Model> model = make_model(config.model);
  Observable f = make_observable(config.observable);

  switch (config.experiment) {
    case ExperimentKind::Trace: {
      auto traces = slln::run_traces(*model, f, config.horizon, config.checkpoints, config.seed,
                                     config.replications, config.engine);
      emit("trace.csv", io::trace_csv(traces));
      json report = trace_report(config, traces);
      if (config.reference == "regime_ergodic_limit") {
        const auto& regime = dynamic_cast<const RegimeSwitching&>(*model);
        double limit = oracle::regime_ergodic_limit(regime.params(), f);
        double worst = 0.0;
        for (const auto& t : traces) {
          worst = std::max(worst, std::abs(t.terminal().mean_fx - limit));
        }
        bool ok = worst <= config.tolerance;
        report["reference"] = json{{"kind", config.reference},
                                   {"limit", limit},
                                   {"max_abs_error", worst},
                                   {"tolerance", config.tolerance},
                                   {"pass", ok}};
        result.checks_passed = ok;
      }
      result.report = report;
      break;
    }
    case ExperimentKind::GapDecay: {
      auto traces = slln::run_traces(*model, f, config.horizon, config.checkpoints, config.seed,
                                     config.replications, config.engine);
      emit("trace.csv", io::trace_csv(traces));
      auto decay =
          slln::gap_decay_check(traces, config.gap_decay.decay_factor, config.gap_decay.floor);
      json report;
      report["experiment"] = "gap_decay";
      report["model"] = traces.front().model_id;
      report["observable"] = traces.front().observable_id;
      report["decade_ns"] = decay.decade_ns;
      report["decade_medians"] = decay.decade_medians;
      report["decay_factor"] = config.gap_decay.decay_factor;
      report["floor"] = config.gap_decay.floor;
      report["violations"] = decay.violations;
      report["pass"] = decay.pass;
      result.report = report;
      result.checks_passed = decay.pass;
      break;
    }
    case ExperimentKind::Hoeffding: {
      auto check = conc::hoeffding_check(*model, config.threshold.n, config.threshold.t,
                                         config.replications, config.seed, config.strict,
                                         config.engine);
      json report = hoeffding_report_json(check);
      report["experiment"] = "hoeffding";
      report["model"] = model->id();
      result.report = report;
      result.checks_passed = check.outcome != conc::Outcome::Fail;
      break;
    }
    case ExperimentKind::TailDecomposition: {
      auto check = conc::tail_decomposition(*model, config.threshold.n, config.threshold.t,
                                            config.replications, config.seed, config.engine);
      json report = tail_report_json(check);
      report["experiment"] = "tail_decomposition";
      report["model"] = model->id();
      result.report = report;
      result.checks_passed = check.pass;
      break;
    }
    case ExperimentKind::FigureData: {
      PathPair pair = sample_two_stage(*model, config.horizon, config.seed, 0);
      auto series = figure::figure_series(pair.latent, pair.observed);
      emit("figure.csv", figure::figure_csv(series));
      emit("figure.svg", figure::render_figure_svg(series));
      json report;
      report["experiment"] = "figure_data";
      report["model"] = model->id();
      report["rows"] = series.size();
      report["theta_terminal"] = series.theta.back();
      report["running_mean_terminal"] = series.running_mean.back();
      result.report = report;
      break;
    }
    case ExperimentKind::SvFunctional: {
      const auto& sv = dynamic_cast<const StochasticVolatility&>(*model);
      auto est = slln::sv_functional_estimate(sv.params(), f, config.horizon, config.seed,
                                              config.replications, config.engine);
      double combined = std::sqrt(est.path_std_error * est.path_std_error +
                                  est.direct_std_error * est.direct_std_error);
      double diff = est.path_average - est.direct_average;
      bool ok = std::abs(diff) <= 3.0 * combined;
      json report;
      report["experiment"] = "sv_functional";
      report["model"] = model->id();
      report["observable"] = f.id();
      report["path_average"] = est.path_average;
      report["path_std_error"] = est.path_std_error;
      report["direct_average"] = est.direct_average;
      report["direct_std_error"] = est.direct_std_error;
      report["replications"] = est.replications;
      report["direct_draws"] = est.direct_draws;
      report["difference"] = diff;
      report["agreement_band"] = 3.0 * combined;
      report["pass"] = ok;
      result.report = report;
      result.checks_passed = ok;
      break;
    }
  }

  emit("report.json", result.report.dump(2) + "\n");
  if (config.strict && !result.checks_passed) {
    throw CheckFailure(experiment_name(config.experiment) +
                       " check failed under strict mode; see report.json");
  }
  return result;
}

}  // namespace prodis::cli
