#include "relbn/rational.hpp"

#include <cctype>

#include "relbn/errors.hpp"

namespace relbn {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational::Rational(const BigInt& n, const BigInt& d) {
  if (d == 0) throw ValidationError("rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw ValidationError("division by zero");
  v_ /= o.v_;
  return *this;
}

bool Rational::try_parse(std::string_view text, Rational* out) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  Rational r;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string_view::npos) {
    auto a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!all_digits(a) || !all_digits(b)) return false;
    BigInt d{std::string(b)};
    if (d == 0) return false;
    r = Rational(BigInt(std::string(a)), d);
  } else if (dot != std::string_view::npos) {
    auto a = s.substr(0, dot), b = s.substr(dot + 1);
    if (a.empty()) a = "0";
    if (!all_digits(a) || !all_digits(b)) return false;
    r = Rational(BigInt(std::string(a) + std::string(b)), pow10(b.size()));
  } else {
    if (!all_digits(s)) return false;
    r = Rational(BigInt(std::string(s)), BigInt(1));
  }
  *out = neg ? -r : r;
  return true;
}

Rational Rational::parse(std::string_view text) {
  Rational r;
  if (!try_parse(text, &r)) throw FormatError("not a rational: '" + std::string(text) + "'");
  return r;
}

std::string decimal_string(const BigInt& num, const BigInt& den, int sig) {
  if (sig < 1) sig = 1;
  if (num == 0) return "0." + std::string(sig - 1, '0');
  BigInt a = abs(num), b = den;
  // Find e with 10^e <= a/b < 10^(e+1).
  long e = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 10));
  auto scaled_ge = [&](long k) {  // a/b >= 10^k
    return k >= 0 ? a >= b * pow10(k) : a * pow10(-k) >= b;
  };
  while (!scaled_ge(e)) --e;
  while (scaled_ge(e + 1)) ++e;
  long k = sig - 1 - e;
  BigInt n = k >= 0 ? a * pow10(k) : a;
  BigInt d = k >= 0 ? b : b * pow10(-k);
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  int c = cmp(BigInt(2 * r), d);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  if (q == pow10(sig)) {
    q = pow10(sig - 1);
    ++e;
  }
  std::string digits = q.get_str();
  std::string out = num < 0 ? "-" : "";
  if (e < 0) {
    out += "0." + std::string(-e - 1, '0') + digits;
  } else if (e + 1 >= sig) {
    out += digits + std::string(e + 1 - sig, '0');
  } else {
    out += digits.substr(0, e + 1) + "." + digits.substr(e + 1);
  }
  return out;
}

std::string Rational::decimal(int sig) const {
  return decimal_string(num(), den(), sig);
}

Rational pow(const Rational& base, unsigned long exp) {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), exp);
  mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), exp);
  return Rational(n, d);
}

BigInt pow2(unsigned long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, exp);
  return r;
}

}  // namespace relbn
