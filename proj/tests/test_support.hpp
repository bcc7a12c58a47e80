#pragma once

// Shared fixtures and independent oracles used across the test suite.  The
// oracles here are deliberately written from scratch (long-double recursions,
// closed forms) so library results are checked against a second derivation,
// not against themselves.

#include <cmath>
#include <string>
#include <vector>

#include "prodis/models.hpp"
#include "prodis/oracle.hpp"

namespace test_support {

inline std::string golden_path(const std::string& name) {
  return std::string(PRODIS_GOLDEN_DIR) + "/" + name;
}

// The workhorse irreducible regime example: emissions 0.7 / 0.3 and a mildly
// persistent chain whose stationary vector is (2/3, 1/3).
inline prodis::RegimeParams demo_regime_params() {
  return prodis::oracle::regime_params_with_stationary(0.7, 0.3, {{{0.9, 0.1}, {0.2, 0.8}}});
}

// Exact upper tail P(Bin(n, p) >= k) via a long-double pmf recursion.
inline long double binomial_upper_tail(unsigned n, long double p, unsigned k) {
  if (k == 0) return 1.0L;
  if (k > n) return 0.0L;
  // pmf(0) = (1-p)^n, pmf(j+1) = pmf(j) * (n-j)/(j+1) * p/(1-p)
  long double q = 1.0L - p;
  if (p == 0.0L) return 0.0L;
  if (q == 0.0L) return 1.0L;
  long double log_pmf = static_cast<long double>(n) * std::log(q);
  long double pmf = std::exp(log_pmf);
  long double tail = k == 0 ? pmf : 0.0L;
  long double ratio = p / q;
  for (unsigned j = 0; j + 1 <= n; ++j) {
    pmf *= static_cast<long double>(n - j) / static_cast<long double>(j + 1) * ratio;
    if (j + 1 >= k) tail += pmf;
  }
  return tail;
}

// E[theta^s (1-theta)^z] for theta uniform on [0,1]: s! z! / (s+z+1)!.
inline long double uniform_beta_moment(unsigned s, unsigned z) {
  long double value = 1.0L;
  // s! z! / (s+z+1)! = prod_{j=1..z} j/(s+j) / (s+z+1)
  for (unsigned j = 1; j <= z; ++j) {
    value *= static_cast<long double>(j) / static_cast<long double>(s + j);
  }
  return value / static_cast<long double>(s + z + 1);
}

// All 3^coords cylinder events over a binary state space with subsets drawn
// from {{a},{b},{a,b}} at coordinates 0..coords-1.
inline std::vector<prodis::oracle::CylinderEvent> all_binary_events(std::size_t coords, double a,
                                                                    double b) {
  std::vector<prodis::oracle::CylinderEvent> events;
  std::size_t total = 1;
  for (std::size_t i = 0; i < coords; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    prodis::oracle::CylinderEvent event;
    std::size_t rest = code;
    for (std::size_t i = 0; i < coords; ++i) {
      std::size_t pick = rest % 3;
      rest /= 3;
      if (pick == 0) {
        event.coords.push_back({i, {a}});
      } else if (pick == 1) {
        event.coords.push_back({i, {b}});
      } else {
        event.coords.push_back({i, {a, b}});
      }
    }
    events.push_back(event);
  }
  return events;
}

}  // namespace test_support
