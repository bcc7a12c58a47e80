#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodis/models.hpp"

namespace prodis::figure {

// One row per coordinate of a submartingale-coin run: the coin bias, the coin
// outcome, and the running mean of the outcomes.
struct FigureSeries {
  std::vector<std::size_t> n;
  std::vector<double> theta;
  std::vector<int> coin;
  std::vector<double> running_mean;

  std::size_t size() const { return n.size(); }
};

// Builds the series from one two-stage submartingale-coin replication.
FigureSeries figure_series(const LatentPath& latent, const ObservedPath& observed);

// Columns: n,theta_n,coin_outcome,running_mean
std::string figure_csv(const FigureSeries& series);

// Errors on empty data, missing columns or unparsable numbers.
FigureSeries parse_figure_csv(const std::string& content);

// Deterministic standalone SVG: bias polyline, running-mean polyline, coin
// outcomes as tick marks.  Byte-identical output for identical input.
std::string render_figure_svg(const FigureSeries& series);

}  // namespace prodis::figure
