#ifndef BN2O_NUMERIC_HPP
#define BN2O_NUMERIC_HPP

#include <cmath>
#include <cstdlib>

namespace bn2o {

/// Neumaier-compensated running sum. Handles signed terms whose magnitude may
/// exceed the running total, which plain Kahan does not.
template <typename T>
class BasicCompensatedSum {
public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  T value() const { return sum_ + comp_; }

private:
  T sum_ = 0;
  T comp_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;
// extended precision for the signed inclusion-exclusion expansion
using CompensatedSumExt = BasicCompensatedSum<long double>;

/// log(1 - exp(log_p)) for log_p <= 0, accurate near both ends.
inline double log1m_exp(double log_p) {
  if (log_p >= 0.0) return -INFINITY;
  // cutover per Maechler's note on computing log(1-exp(-a))
  if (log_p > -0.6931471805599453) return std::log(-std::expm1(log_p));
  return std::log1p(-std::exp(log_p));
}

/// 1 - exp(log_p) for log_p <= 0.
inline double one_minus_exp(double log_p) { return -std::expm1(log_p); }

/// logistic(x) = 1/(1+e^-x), saturating cleanly for +-inf.
inline double logistic(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace bn2o

#endif
