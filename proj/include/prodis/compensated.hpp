#pragma once

#include <cmath>
#include <cstddef>

namespace prodis {

// Neumaier-compensated running sum.  Long streaming accumulations (horizons of
// 1e5 and beyond) must not drift, so every running mean in the library goes
// through one of these instead of a bare double.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    ++count_;
  }

  double value() const { return sum_ + comp_; }
  std::size_t count() const { return count_; }
  double mean() const { return count_ == 0 ? 0.0 : value() / static_cast<double>(count_); }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace prodis
