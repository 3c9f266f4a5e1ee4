#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace walgebra {

/// Exact rational number. Values that fit in 64 bits stay unboxed; larger
/// ones are promoted to a shared immutable GMP rational.
class Rat {
 public:
  Rat() = default;
  Rat(long long v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(int v) : num_(v) {}        // NOLINT(google-explicit-constructor)
  Rat(long long num, long long den);
  explicit Rat(const mpq_class& q);

  /// Parses "a", "-a/b" in decimal.
  static Rat parse(const std::string& text);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const;

  std::string num_str() const;
  std::string den_str() const;
  std::string str() const;

  /// True when numerator and denominator both fit in int64.
  bool fits_int64() const { return !big_; }
  long long small_num() const { return num_; }
  long long small_den() const { return den_; }

  mpq_class to_mpq() const;

  Rat operator-() const;
  Rat inverse() const;
  friend Rat operator+(const Rat& a, const Rat& b);
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);
  friend Rat operator/(const Rat& a, const Rat& b);
  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }

  friend bool operator==(const Rat& a, const Rat& b);
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

  std::size_t hash() const;

 private:
  static Rat from_i128(__int128 num, __int128 den);
  static Rat from_mpq(mpq_class q);

  long long num_ = 0;
  long long den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

/// Generalized binomial coefficient C(n, j) for any integer n and j >= 0.
Rat binomial(long long n, long long j);

}  // namespace walgebra
