#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace relbn {

using BigInt = mpz_class;

// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT(runtime/explicit)
  Rational(const BigInt& n, const BigInt& d);
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "p/q", "n" and exact decimals such as "0.2" or "-1.25".
  static Rational parse(std::string_view text);
  static bool try_parse(std::string_view text, Rational* out);

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_probability() const { return sgn(v_) >= 0 && v_ <= 1; }

  std::string str() const { return v_.get_str(); }
  // `sig` significant digits, round-half-even.
  std::string decimal(int sig = 12) const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  mpq_class v_;
};

Rational pow(const Rational& base, unsigned long exp);
BigInt pow2(unsigned long exp);

std::string decimal_string(const BigInt& num, const BigInt& den, int sig);

}  // namespace relbn
