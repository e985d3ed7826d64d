#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hypowalk {

// Exact rational arithmetic on 64-bit integers. Structure constants of the
// free nilpotent algebras we support (p <= 4, r <= 5) and the truncated BCH
// coefficients stay far below the 64-bit range; the __int128 intermediates
// plus overflow checks are a safety net, not a big-integer substitute.
class Rat {
public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}
  Rat(long long n, long long d) : num_(n), den_(d) {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    normalize();
  }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rat operator-() const { return Rat(checked(-static_cast<__int128>(num_)), den_, already_normal{}); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return make(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
  struct already_normal {};
  Rat(long long n, long long d, already_normal) : num_(n), den_(d) {}

  static long long checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rat: 64-bit overflow");
    return static_cast<long long>(v);
  }
  static Rat make(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    return Rat(checked(n), checked(d), already_normal{});
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void normalize() {
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  long long num_;
  long long den_;
};

}  // namespace hypowalk
