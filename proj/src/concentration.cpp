#include "prodis/concentration.hpp"

#include <cmath>

#include "prodis/compensated.hpp"
#include "prodis/errors.hpp"

namespace prodis::conc {

namespace {

struct UnitIntervalMean {
  double operator()(const FiniteMeasure& m) const {
    for (double s : m.support()) {
      if (s < 0.0 || s > 1.0) {
        throw InvariantViolation("conditional_mean needs coordinates valued in [0,1]; state " +
                                 std::to_string(s) + " is outside");
      }
    }
    return m.mean();
  }
  double operator()(const PointMass& m) const {
    if (m.atom() < 0.0 || m.atom() > 1.0) {
      throw InvariantViolation("conditional_mean needs coordinates valued in [0,1]; atom " +
                               std::to_string(m.atom()) + " is outside");
    }
    return m.mean();
  }
  double operator()(const PushforwardMeasure&) const {
    throw InvariantViolation(
        "conditional_mean needs coordinates valued in [0,1]; continuous pushforward laws are not");
  }
};

void validate_nt(std::size_t n, double t) {
  if (n == 0) throw InvariantViolation("horizon must be positive");
  if (!(t > 0.0) || t > static_cast<double>(n)) {
    throw InvariantViolation("threshold t must lie in (0, n] (absolute count units)");
  }
}

struct RepFlags {
  unsigned char in_condition = 0;
  unsigned char exceeds = 0;
  unsigned char latent_exceeds = 0;
};

std::vector<RepFlags> run_flags(const Model& model, std::size_t n, double t,
                                std::size_t replications, std::uint64_t seed,
                                ExecutionPolicy policy) {
  if (replications == 0) throw InvariantViolation("need at least one replication");
  std::vector<RepFlags> flags(replications);
  for_each_replication(replications, policy, [&](std::size_t r) {
    PathPair pair = sample_two_stage(model, n, seed, r);
    double latent_mean = conditional_mean(pair.latent);
    CompensatedSum s;
    for (double x : pair.observed.points) s.add(x);
    double total = s.value();
    flags[r].in_condition = latent_mean < t ? 1 : 0;
    flags[r].exceeds = total >= t ? 1 : 0;
    flags[r].latent_exceeds = latent_mean >= t ? 1 : 0;
  });
  return flags;
}

double binomial_std_error(double p, std::size_t count) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(count));
}

}  // namespace

double conditional_mean(const LatentPath& latent) {
  if (latent.measures.empty()) throw InvariantViolation("empty latent path");
  CompensatedSum acc;
  for (const Measure& m : latent.measures) {
    acc.add(std::visit(UnitIntervalMean{}, m));
  }
  return acc.value();
}

double hoeffding_bound(std::size_t n, double t) {
  validate_nt(n, t);
  return std::exp(-2.0 * t * t / static_cast<double>(n));
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    case Outcome::Vacuous:
      return "vacuous";
  }
  return "unknown";
}

ConcentrationReport hoeffding_check(const Model& model, std::size_t n, double t,
                                    std::size_t replications, std::uint64_t seed, bool strict,
                                    ExecutionPolicy policy) {
  validate_nt(n, t);
  ConcentrationReport report;
  report.n = n;
  report.t = t;
  report.bound = hoeffding_bound(n, t);
  report.replications = replications;
  report.degenerate = model.is_canonical();

  std::vector<RepFlags> flags = run_flags(model, n, t, replications, seed, policy);
  for (const RepFlags& f : flags) {
    if (f.in_condition) {
      ++report.in_condition;
      if (f.exceeds) ++report.exceedances;
    }
  }

  if (report.in_condition == 0) {
    if (strict) {
      throw CheckFailure("conditioning event E[S_n|xi] < t never occurred in " +
                         std::to_string(replications) + " replications");
    }
    report.outcome = Outcome::Vacuous;
    return report;
  }

  report.empirical_conditional =
      static_cast<double>(report.exceedances) / static_cast<double>(report.in_condition);
  report.slack = 3.0 * binomial_std_error(report.bound, report.in_condition);
  report.outcome = report.empirical_conditional <= report.bound + report.slack ? Outcome::Pass
                                                                               : Outcome::Fail;
  return report;
}

TailDecompositionReport tail_decomposition(const Model& model, std::size_t n, double t,
                                           std::size_t replications, std::uint64_t seed,
                                           ExecutionPolicy policy) {
  validate_nt(n, t);
  TailDecompositionReport report;
  report.n = n;
  report.t = t;
  report.bound = hoeffding_bound(n, t);
  report.replications = replications;

  std::vector<RepFlags> flags = run_flags(model, n, t, replications, seed, policy);
  std::size_t total_hits = 0;
  std::size_t latent_hits = 0;
  for (const RepFlags& f : flags) {
    total_hits += f.exceeds;
    latent_hits += f.latent_exceeds;
  }
  report.total_tail = static_cast<double>(total_hits) / static_cast<double>(replications);
  report.latent_tail = static_cast<double>(latent_hits) / static_cast<double>(replications);
  report.total_std_error = binomial_std_error(report.total_tail, replications);
  report.latent_std_error = binomial_std_error(report.latent_tail, replications);
  report.slack = 3.0 * (report.total_std_error + report.latent_std_error);
  report.pass = report.total_tail <= report.latent_tail + report.bound + report.slack;
  return report;
}

const std::vector<SuiteConfig>& standard_check_suite() {
  static const std::vector<SuiteConfig> suite = [] {
    std::vector<SuiteConfig> s;
    auto iid = std::make_shared<IidUniformBernoulli>();
    auto point = [](double p) {
      return std::make_shared<ExchangeableBernoulli>(ExchangeablePrior{PointPrior{p}});
    };
    auto two_point = [](double a, double b, double w) {
      return std::make_shared<ExchangeableBernoulli>(ExchangeablePrior{TwoPointPrior{a, b, w}});
    };
    auto canonical_iid = std::make_shared<CanonicalModel>(std::make_shared<IidUniformBernoulli>());
    auto canonical_point3 = std::make_shared<CanonicalModel>(
        std::make_shared<ExchangeableBernoulli>(ExchangeablePrior{PointPrior{0.3}}));

    // Uniform-mixture coordinates: unconditional S_n is Binomial(n, 1/2).
    s.push_back({"iid_n50_t46", iid, 50, 46.0, 9101});
    s.push_back({"iid_n80_t70", iid, 80, 70.0, 9102});
    s.push_back({"iid_n100_t82", iid, 100, 82.0, 9103});
    s.push_back({"iid_n100_t90", iid, 100, 90.0, 9104});
    s.push_back({"iid_n150_t120", iid, 150, 120.0, 9105});
    s.push_back({"iid_n200_t150", iid, 200, 150.0, 9106});
    // Constant-bias coordinates: S_n is Binomial(n, p).
    s.push_back({"point10_n100_t40", point(0.1), 100, 40.0, 9107});
    s.push_back({"point20_n100_t60", point(0.2), 100, 60.0, 9108});
    s.push_back({"point25_n100_t75", point(0.25), 100, 75.0, 9109});
    s.push_back({"point30_n200_t120", point(0.3), 200, 120.0, 9110});
    s.push_back({"point40_n100_t85", point(0.4), 100, 85.0, 9111});
    s.push_back({"point50_n100_t92", point(0.5), 100, 92.0, 9112});
    // Mixed-bias coordinates; the last two condition away the high regime.
    s.push_back({"mix10_30_n100_t70", two_point(0.1, 0.3, 0.5), 100, 70.0, 9113});
    s.push_back({"mix20_40_n100_t80", two_point(0.2, 0.4, 0.5), 100, 80.0, 9114});
    s.push_back({"mix30_45_n100_t85", two_point(0.3, 0.45, 0.7), 100, 85.0, 9115});
    s.push_back({"mix10_60_n100_t35", two_point(0.1, 0.6, 0.5), 100, 35.0, 9116});
    s.push_back({"mix05_50_n100_t30", two_point(0.05, 0.5, 0.5), 100, 30.0, 9117});
    // Degenerate disintegrations: the condition excludes the event outright.
    s.push_back({"canonical_iid_n100_t60", canonical_iid, 100, 60.0, 9118});
    s.push_back({"canonical_point30_n100_t50", canonical_point3, 100, 50.0, 9119});
    // Vacuous entry: E[S_n|xi] = S_n below 20 essentially never happens.
    s.push_back({"canonical_iid_n100_t20_vacuous", canonical_iid, 100, 20.0, 9120});
    return s;
  }();
  return suite;
}

const std::vector<SuiteConfig>& tail_decomposition_suite() {
  static const std::vector<SuiteConfig> suite = [] {
    std::vector<SuiteConfig> s;
    auto iid = std::make_shared<IidUniformBernoulli>();
    auto uniform =
        std::make_shared<ExchangeableBernoulli>(ExchangeablePrior{UniformPrior{}});
    auto point5 = std::make_shared<ExchangeableBernoulli>(ExchangeablePrior{PointPrior{0.5}});
    auto mix = std::make_shared<ExchangeableBernoulli>(ExchangeablePrior{TwoPointPrior{0.1, 0.6, 0.5}});
    s.push_back({"iid_n100_t90", iid, 100, 90.0, 9301});
    s.push_back({"point50_n100_t90", point5, 100, 90.0, 9302});
    // Uniform prior at t = 0.9 n: S_n is uniform on {0..n}, so the total tail
    // is 11/101 while the latent tail is exactly 0.1 -- the decomposition gets
    // by on its sampling slack here, which is the interesting regime.
    s.push_back({"uniform_n100_t90", uniform, 100, 90.0, 9303});
    s.push_back({"mix10_60_n100_t35", mix, 100, 35.0, 9304});
    return s;
  }();
  return suite;
}

}  // namespace prodis::conc
