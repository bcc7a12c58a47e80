#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "prodis/errors.hpp"
#include "prodis/figure.hpp"
#include "prodis/io.hpp"
#include "prodis/rng.hpp"
#include "prodis/slln.hpp"

using namespace prodis;

TEST_CASE("format_real round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789, 0.0, -0.0, 1e300,
                   2.2250738585072014e-308, 0.3333333333333333}) {
    std::string text = io::format_real(v);
    CHECK(std::stod(text) == v);
  }
  CHECK(io::format_real(0.5) == "0.5");
  CHECK(io::format_real(-1.0) == "-1");
}

TEST_CASE("file io round-trips and reports failures") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "prodis_io_test";
  fs::create_directories(dir);
  std::string path = (dir / "blob.txt").string();
  std::string content = "line one\nline two\n";
  io::write_file(path, content);
  CHECK(io::read_file(path) == content);
  CHECK_THROWS_AS(io::read_file((dir / "missing.txt").string()), ConfigError);
  CHECK_THROWS_AS(io::write_file((dir / "no_such_dir" / "blob.txt").string(), "x"),
                  ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("trace CSV layout and reconstruction") {
  IidUniformBernoulli model;
  auto traces = slln::run_traces(model, Observable::indicator_at(1.0), 1000, {100, 1000},
                                 112233, 3, ExecutionPolicy::Serial);
  std::string csv = io::trace_csv(traces);
  auto rows = io::parse_csv(csv);
  REQUIRE(rows.size() == 1 + 3 * 2);
  CHECK(rows[0] == std::vector<std::string>{"n", "mean_fX", "mean_xif", "gap",
                                            "replication", "seed"});
  // Replication-major ordering with checkpoints inside.
  CHECK(rows[1][0] == "100");
  CHECK(rows[2][0] == "1000");
  CHECK(rows[1][4] == "0");
  CHECK(rows[3][4] == "1");
  CHECK(rows[1][5] == "112233");
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& row = rows[1 + 2 * r + k];
      const auto& cp = traces[r].checkpoints[k];
      CHECK(std::stod(row[1]) == cp.mean_fx);
      CHECK(std::stod(row[2]) == cp.mean_xif);
      CHECK(std::stod(row[3]) == cp.gap);
    }
  }
  CHECK(io::trace_csv({}) == "n,mean_fX,mean_xif,gap,replication,seed\n");
}

TEST_CASE("parse_csv splits rows and fields") {
  auto rows = io::parse_csv("a,b\r\n1,2\n\n3,4\n");
  REQUIRE(rows.size() == 3);  // blank lines are dropped
  CHECK(rows[0] == std::vector<std::string>{"a", "b"});
  CHECK(rows[1] == std::vector<std::string>{"1", "2"});
  CHECK(rows[2] == std::vector<std::string>{"3", "4"});
  CHECK(io::parse_csv("").empty());
}

namespace {

figure::FigureSeries forced_series(double forced_uniform, std::size_t horizon) {
  set_test_hooks(true);
  SubmartingaleCoin model;
  RngStream latent_stream(StreamKey{1, 0, 0});
  latent_stream.force_uniforms(forced_uniform);
  LatentPath latent = model.sample_latent(horizon, latent_stream);
  RngStream obs_stream(StreamKey{1, 0, 1});
  obs_stream.force_uniforms(forced_uniform);
  ObservedPath observed = sample_observed(latent, obs_stream);
  set_test_hooks(false);
  return figure::figure_series(latent, observed);
}

}  // namespace

TEST_CASE("figure series tracks the bias, the coins and the running mean") {
  figure::FigureSeries series = forced_series(1.0, 21);
  REQUIRE(series.size() == 21);
  for (std::size_t i = 0; i < 21; ++i) {
    CHECK(series.n[i] == i);
    // Forced-high driving noise pins the bias to its dyadic envelope and
    // makes every coin land on 1 (the sampler inverts the CDF at u = 1).
    CHECK(series.theta[i] == 1.0 - std::exp2(-static_cast<double>(i) - 1.0));
    CHECK(series.coin[i] == 1);
    CHECK(series.running_mean[i] == 1.0);
  }

  figure::FigureSeries flat = forced_series(0.0, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(flat.theta[i] == 0.0);
    CHECK(flat.coin[i] == 0);
    CHECK(flat.running_mean[i] == 0.0);
  }
}

TEST_CASE("figure series validates its inputs") {
  SubmartingaleCoin model;
  PathPair pair = sample_two_stage(model, 5, 2, 0);
  LatentPath latent = pair.latent;
  ObservedPath observed = pair.observed;
  observed.points.pop_back();
  CHECK_THROWS_AS(figure::figure_series(latent, observed), InvariantViolation);

  IidUniformBernoulli other;
  PathPair foreign = sample_two_stage(other, 5, 2, 0);
  CHECK_THROWS_AS(figure::figure_series(foreign.latent, foreign.observed),
                  InvariantViolation);

  LatentPath empty;
  ObservedPath none;
  none.model_id = "submartingale_coin";
  empty.model_id = "submartingale_coin";
  CHECK_THROWS_AS(figure::figure_series(empty, none), InvariantViolation);
}

TEST_CASE("figure CSV round-trips its series") {
  SubmartingaleCoin model;
  PathPair pair = sample_two_stage(model, 21, 20270917, 0);
  figure::FigureSeries series = figure::figure_series(pair.latent, pair.observed);
  std::string csv = figure::figure_csv(series);
  CHECK(csv.substr(0, csv.find('\n')) == "n,theta_n,coin_outcome,running_mean");
  figure::FigureSeries back = figure::parse_figure_csv(csv);
  REQUIRE(back.size() == series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(back.n[i] == series.n[i]);
    CHECK(back.theta[i] == series.theta[i]);  // exact: 17-digit formatting
    CHECK(back.coin[i] == series.coin[i]);
    CHECK(back.running_mean[i] == series.running_mean[i]);
  }
}

TEST_CASE("figure CSV parsing rejects malformed input") {
  CHECK_THROWS_AS(figure::parse_figure_csv(""), ConfigError);
  CHECK_THROWS_AS(figure::parse_figure_csv("x,y\n1,2\n"), ConfigError);
  std::string header = "n,theta_n,coin_outcome,running_mean\n";
  CHECK_THROWS_AS(figure::parse_figure_csv(header), ConfigError);
  CHECK_THROWS_AS(figure::parse_figure_csv(header + "1,0.5\n"), ConfigError);
  CHECK_THROWS_AS(figure::parse_figure_csv(header + "1,abc,1,0.5\n"), ConfigError);
  CHECK_THROWS_AS(figure::parse_figure_csv(header + "1,0.5,2,0.5\n"), ConfigError);
  CHECK_THROWS_AS(figure::parse_figure_csv(header + "1,0.5,1,0.5extra\n"), ConfigError);
  CHECK_NOTHROW(figure::parse_figure_csv(header + "1,0.5,1,1\n"));
}

TEST_CASE("the figure SVG is deterministic and complete") {
  SubmartingaleCoin model;
  PathPair pair = sample_two_stage(model, 21, 20270917, 0);
  figure::FigureSeries series = figure::figure_series(pair.latent, pair.observed);
  std::string svg_a = figure::render_figure_svg(series);
  std::string svg_b = figure::render_figure_svg(series);
  CHECK(svg_a == svg_b);
  CHECK(svg_a.rfind("<svg", 0) == 0);
  CHECK(svg_a.find("</svg>") != std::string::npos);
  CHECK(svg_a.find("polyline") != std::string::npos);
  // One marker per coin outcome.
  std::size_t circles = 0;
  for (std::size_t pos = svg_a.find("<circle"); pos != std::string::npos;
       pos = svg_a.find("<circle", pos + 1)) {
    ++circles;
  }
  CHECK(circles == series.size());

  figure::FigureSeries empty;
  CHECK_THROWS_AS(figure::render_figure_svg(empty), ConfigError);
}
