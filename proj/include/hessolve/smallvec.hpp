#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <span>

namespace hessolve {

/// Hard cap on the tuple dimension handled by the dense kernels.
inline constexpr int kMaxDim = 8;

/// Fixed-capacity vector used for eigenvalue tuples, gradients and small
/// coordinate math.  Never allocates; cheap to copy by value.
class SmallVec {
 public:
  SmallVec() = default;

  explicit SmallVec(int n, double fill = 0.0) : n_(n) {
    assert(n >= 0 && n <= kMaxDim);
    for (int i = 0; i < n_; ++i) v_[i] = fill;
  }

  SmallVec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    assert(n_ <= kMaxDim);
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }

  static SmallVec ones(int n) { return SmallVec(n, 1.0); }

  static SmallVec from(std::span<const double> xs) {
    SmallVec r;
    r.n_ = static_cast<int>(xs.size());
    assert(r.n_ <= kMaxDim);
    for (int i = 0; i < r.n_; ++i) r.v_[i] = xs[i];
    return r;
  }

  int size() const { return n_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::span<const double> span() const { return {v_.data(), static_cast<size_t>(n_)}; }

  double sum() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += v_[i];
    return s;
  }

  double min() const {
    double s = v_[0];
    for (int i = 1; i < n_; ++i) s = std::min(s, v_[i]);
    return s;
  }

  double max() const {
    double s = v_[0];
    for (int i = 1; i < n_; ++i) s = std::max(s, v_[i]);
    return s;
  }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += v_[i] * v_[i];
    return std::sqrt(s);
  }

 private:
  std::array<double, kMaxDim> v_{};
  int n_ = 0;
};

inline SmallVec operator+(const SmallVec& a, const SmallVec& b) {
  assert(a.size() == b.size());
  SmallVec r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline SmallVec operator-(const SmallVec& a, const SmallVec& b) {
  assert(a.size() == b.size());
  SmallVec r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline SmallVec operator*(double s, const SmallVec& a) {
  SmallVec r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

}  // namespace hessolve
