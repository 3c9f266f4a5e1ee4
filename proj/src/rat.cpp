#include "walgebra/rat.hpp"

#include <numeric>
#include <stdexcept>

namespace walgebra {

namespace {

constexpr __int128 kSmallLimit = (static_cast<__int128>(1) << 62);

bool small_enough(__int128 v) { return v < kSmallLimit && v > -kSmallLimit; }

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rat::Rat(long long num, long long den) {
  if (den == 0) throw std::domain_error("Rat: zero denominator");
  *this = from_i128(num, den);
}

Rat::Rat(const mpq_class& q) { *this = from_mpq(q); }

Rat Rat::from_i128(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rat();
  __int128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (small_enough(num) && small_enough(den)) {
    Rat r;
    r.num_ = static_cast<long long>(num);
    r.den_ = static_cast<long long>(den);
    return r;
  }
  mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
  Rat r;
  r.big_ = std::make_shared<const mpq_class>(std::move(q));
  return r;
}

Rat Rat::from_mpq(mpq_class q) {
  q.canonicalize();
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (mpz_sizeinbase(n.get_mpz_t(), 2) < 62 && mpz_sizeinbase(d.get_mpz_t(), 2) < 62) {
    Rat r;
    // Both fit in a signed 64-bit long on LP64.
    r.num_ = n.get_si();
    r.den_ = d.get_si();
    return r;
  }
  Rat r;
  r.big_ = std::make_shared<const mpq_class>(std::move(q));
  return r;
}

Rat Rat::parse(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("Rat: cannot parse '" + text + "'");
  if (q.get_den() == 0) throw std::domain_error("Rat: zero denominator");
  return from_mpq(q);
}

mpq_class Rat::to_mpq() const {
  if (big_) return *big_;
  mpq_class q;
  q.get_num() = static_cast<long>(num_);
  q.get_den() = static_cast<long>(den_);
  return q;
}

bool Rat::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rat::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

std::string Rat::num_str() const { return big_ ? big_->get_num().get_str() : std::to_string(num_); }
std::string Rat::den_str() const { return big_ ? big_->get_den().get_str() : std::to_string(den_); }

std::string Rat::str() const {
  if (is_integer()) return num_str();
  return num_str() + "/" + den_str();
}

Rat Rat::operator-() const {
  if (big_) return from_mpq(-*big_);
  Rat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rat Rat::inverse() const {
  if (is_zero()) throw std::domain_error("Rat: inverse of zero");
  if (big_) return from_mpq(1 / *big_);
  return from_i128(den_, num_);
}

Rat operator+(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) return Rat::from_i128(static_cast<__int128>(a.num_) + b.num_, 1);
    return Rat::from_i128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
  }
  return Rat::from_mpq(a.to_mpq() + b.to_mpq());
}

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat operator*(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) {
    return Rat::from_i128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  return Rat::from_mpq(a.to_mpq() * b.to_mpq());
}

Rat operator/(const Rat& a, const Rat& b) { return a * b.inverse(); }

bool operator==(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: a value is big iff it does not fit
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::size_t Rat::hash() const {
  if (big_) return std::hash<std::string>()(big_->get_str());
  return std::hash<long long>()(num_) * 1000003u ^ std::hash<long long>()(den_);
}

Rat binomial(long long n, long long j) {
  if (j < 0) return Rat(0);
  Rat r(1);
  for (long long t = 0; t < j; ++t) r = r * Rat(n - t, t + 1);
  return r;
}

}  // namespace walgebra
