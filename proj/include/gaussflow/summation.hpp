#pragma once

#include <cmath>
#include <span>

namespace gaussflow {

/// Neumaier-compensated accumulator. Results depend only on the order of
/// `add` calls, so fixed node order gives bit-reproducible reductions.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) acc.add(weights[i] * values[i]);
  return acc.value();
}

}  // namespace gaussflow
