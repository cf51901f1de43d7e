#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched group parameter, vector length, or multivector degree.
struct DimensionError : Error {
  using Error::Error;
};

// Argument outside the declared domain (out-of-box point, r <= 0, ...).
struct DomainError : Error {
  using Error::Error;
};

// A library-internal invariant failed; maps to CLI exit code 4.
struct InvariantError : Error {
  using Error::Error;
};

// Axis-aligned box, the only integration/parameter domain we support.
struct Box {
  std::vector<double> lo, hi;

  Box() = default;
  Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw DimensionError("box: lo/hi length mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i])) throw DomainError("box: empty extent on axis " + std::to_string(i));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }

  bool contains(const std::vector<double>& u) const {
    if (u.size() != lo.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (u[i] < lo[i] || u[i] > hi[i]) return false;
    return true;
  }

  std::vector<double> center() const {
    std::vector<double> c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }
};

// Neumaier compensated accumulator; keeps parallel reductions
// order-insensitive to ~1e-14.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

}  // namespace heis
