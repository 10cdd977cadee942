#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcrf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
using TagSeq = std::vector<int>;

/// Thrown on malformed input files (bad header, unknown label, ragged rows).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a file cannot be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on caller-side misuse: mismatched shapes, indices out of range.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when a computation produces or would produce non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Max-shifted log(sum(exp(v))). Entries equal to -inf contribute nothing;
/// returns -inf for an all-(-inf) input.
inline double log_sum_exp(const Eigen::Ref<const Vector>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

/// Streaming log-sum-exp accumulator for sums too large to materialize.
class LogSumAcc {
 public:
  void add(double x) {
    if (x <= shift_) {
      sum_ += std::exp(x - shift_);
    } else {
      sum_ = sum_ * std::exp(shift_ - x) + 1.0;
      shift_ = x;
    }
  }
  double value() const {
    if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(sum_);
  }

 private:
  double shift_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

/// Deterministic random source. All sampling goes through explicit
/// arithmetic on mt19937_64 output so that streams are reproducible
/// across standard libraries, unlike std::*_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t n = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(next()) * n;
    return lo + static_cast<int>(wide >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index sampled proportionally to the (non-negative) weights.
  int categorical(const Eigen::Ref<const Vector>& weights) {
    const double total = weights.sum();
    double u = uniform() * total;
    for (Eigen::Index i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
  }

  /// Fisher-Yates shuffle driven by this stream.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hcrf
