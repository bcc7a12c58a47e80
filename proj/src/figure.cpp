#include "prodis/figure.hpp"

#include <cstdio>
#include <stdexcept>

#include "prodis/compensated.hpp"
#include "prodis/errors.hpp"
#include "prodis/io.hpp"

namespace prodis::figure {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 44.0;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

double parse_number(const std::string& field, const char* column) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("figure data: unparsable ") + column + " value '" + field + "'");
  }
  if (used != field.size()) {
    throw ConfigError(std::string("figure data: unparsable ") + column + " value '" + field + "'");
  }
  return value;
}

}  // namespace

FigureSeries figure_series(const LatentPath& latent, const ObservedPath& observed) {
  if (latent.model_id != "submartingale_coin") {
    throw InvariantViolation("figure_series needs a submartingale_coin path");
  }
  if (latent.measures.size() != observed.points.size() || latent.measures.empty()) {
    throw InvariantViolation("figure_series needs matching nonempty paths");
  }
  FigureSeries series;
  CompensatedSum running;
  for (std::size_t i = 0; i < latent.measures.size(); ++i) {
    const auto* m = std::get_if<FiniteMeasure>(&latent.measures[i]);
    if (m == nullptr) throw InvariantViolation("unexpected latent measure type");
    double x = observed.points[i];
    running.add(x);
    series.n.push_back(i);
    series.theta.push_back(m->mass_at(1.0));
    series.coin.push_back(x == 1.0 ? 1 : 0);
    series.running_mean.push_back(running.value() / static_cast<double>(i + 1));
  }
  return series;
}

std::string figure_csv(const FigureSeries& series) {
  std::string out = "n,theta_n,coin_outcome,running_mean\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += std::to_string(series.n[i]);
    out += ',';
    out += io::format_real(series.theta[i]);
    out += ',';
    out += std::to_string(series.coin[i]);
    out += ',';
    out += io::format_real(series.running_mean[i]);
    out += '\n';
  }
  return out;
}

FigureSeries parse_figure_csv(const std::string& content) {
  auto rows = io::parse_csv(content);
  if (rows.empty()) throw ConfigError("figure data is empty");
  const std::vector<std::string> expected = {"n", "theta_n", "coin_outcome", "running_mean"};
  if (rows.front() != expected) {
    throw ConfigError("figure data: header must be n,theta_n,coin_outcome,running_mean");
  }
  if (rows.size() == 1) throw ConfigError("figure data has a header but no rows");
  FigureSeries series;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 4) throw ConfigError("figure data: row with wrong column count");
    series.n.push_back(static_cast<std::size_t>(parse_number(row[0], "n")));
    series.theta.push_back(parse_number(row[1], "theta_n"));
    double coin = parse_number(row[2], "coin_outcome");
    if (coin != 0.0 && coin != 1.0) throw ConfigError("figure data: coin_outcome must be 0 or 1");
    series.coin.push_back(coin == 1.0 ? 1 : 0);
    series.running_mean.push_back(parse_number(row[3], "running_mean"));
  }
  return series;
}

std::string render_figure_svg(const FigureSeries& series) {
  if (series.size() == 0) throw ConfigError("figure data is empty");
  double n_max = static_cast<double>(series.n.back());
  if (n_max == 0.0) n_max = 1.0;
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double n) { return kLeft + plot_w * (n / n_max); };
  auto sy = [&](double v) { return kTop + plot_h * (1.0 - v); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
  // Axes.
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(sy(0.0)) + "\" x2=\"" +
         coord(kWidth - kRight) + "\" y2=\"" + coord(sy(0.0)) +
         "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(sy(0.0)) + "\" x2=\"" + coord(kLeft) +
         "\" y2=\"" + coord(sy(1.0)) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg += "<line x1=\"" + coord(kLeft - 4.0) + "\" y1=\"" + coord(sy(tick)) + "\" x2=\"" +
           coord(kLeft) + "\" y2=\"" + coord(sy(tick)) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + coord(kLeft - 8.0) + "\" y=\"" + coord(sy(tick) + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + coord(tick) +
           "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    double x = sx(static_cast<double>(series.n[i]));
    svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(sy(0.0)) + "\" x2=\"" + coord(x) +
           "\" y2=\"" + coord(sy(0.0) + 4.0) + "\" stroke=\"#333333\"/>\n";
  }
  svg += "<text x=\"" + coord(kLeft + plot_w / 2.0) + "\" y=\"" + coord(kHeight - 10.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">n</text>\n";
  // Coin outcomes: tick marks at 0 or 1.
  for (std::size_t i = 0; i < series.size(); ++i) {
    double x = sx(static_cast<double>(series.n[i]));
    double y = sy(static_cast<double>(series.coin[i]));
    svg += "<circle cx=\"" + coord(x) + "\" cy=\"" + coord(y) +
           "\" r=\"3\" fill=\"#2ca02c\" fill-opacity=\"0.7\"/>\n";
  }
  // Bias polyline.
  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += coord(sx(static_cast<double>(series.n[i]))) + "," + coord(sy(series.theta[i]));
  }
  svg += "\"/>\n";
  // Running-mean polyline.
  svg += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,3\" "
         "points=\"";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += coord(sx(static_cast<double>(series.n[i]))) + "," + coord(sy(series.running_mean[i]));
  }
  svg += "\"/>\n";
  svg += "<text x=\"" + coord(kLeft + 8.0) + "\" y=\"" + coord(kTop + 14.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">coin bias</text>\n";
  svg += "<text x=\"" + coord(kLeft + 8.0) + "\" y=\"" + coord(kTop + 30.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">running mean</text>\n";
  svg += "<text x=\"" + coord(kLeft + 8.0) + "\" y=\"" + coord(kTop + 46.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#2ca02c\">coin outcome</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace prodis::figure
