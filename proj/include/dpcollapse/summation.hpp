#pragma once

#include <cmath>
#include <span>

#include <Eigen/Core>

namespace dpc {

/// Neumaier (improved Kahan-Babuska) compensated accumulator.
template <typename Scalar = double>
class NeumaierSum {
 public:
  NeumaierSum() = default;
  explicit NeumaierSum(Scalar initial) : sum_(initial) {}

  void add(Scalar x) {
    using std::abs;
    const Scalar t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  /// Merges another partial sum, keeping both halves of its state.
  void add(const NeumaierSum& other) {
    add(other.sum_);
    add(other.compensation_);
  }

  NeumaierSum& operator+=(Scalar x) {
    add(x);
    return *this;
  }

  Scalar value() const { return sum_ + compensation_; }

 private:
  Scalar sum_{0};
  Scalar compensation_{0};
};

/// Compensated sum of a contiguous range. Eight independent Neumaier lanes
/// run side by side in one packet and are merged in a fixed order at the end.
inline NeumaierSum<double> neumaier_sum(std::span<const double> values) {
  using Lanes = Eigen::Array<double, 8, 1>;
  Lanes sum = Lanes::Zero();
  Lanes comp = Lanes::Zero();
  const double* v = values.data();
  const std::size_t n = values.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const Lanes x = Eigen::Map<const Lanes>(v + i);
    const Lanes t = sum + x;
    const auto keep = sum.abs() >= x.abs();
    comp += (keep.select(sum, x) - t) + keep.select(x, sum);
    sum = t;
  }
  NeumaierSum<double> out;
  for (Eigen::Index l = 0; l < 8; ++l) {
    out.add(sum[l]);
    out.add(comp[l]);
  }
  for (; i < n; ++i) out.add(v[i]);
  return out;
}

}  // namespace dpc
