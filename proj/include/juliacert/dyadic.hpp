// Copyright 2026 The juliacert Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact dyadic rationals p / 2^m backed by GMP integers.

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "juliacert/error.hpp"

namespace juliacert {

// Value num / 2^exp. Canonical form: num odd, or num == 0 and exp == 0.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Dyadic(int v) : num_(v) {}   // NOLINT(google-explicit-constructor)

  static Dyadic from_parts(mpz_class num, std::uint64_t exp) {
    Dyadic d;
    d.num_ = std::move(num);
    d.exp_ = exp;
    d.normalize();
    return d;
  }

  // 2^k for any signed k.
  static Dyadic pow2(long k) {
    Dyadic d(1);
    return d.mul_pow2(k);
  }

  // Exact conversion; every finite double is dyadic.
  static Dyadic from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite double has no dyadic value");
    if (x == 0.0) return Dyadic();
    int e = 0;
    double f = std::frexp(x, &e);
    auto m = static_cast<std::int64_t>(std::ldexp(f, 53));
    Dyadic d;
    mpz_set_si(d.num_.get_mpz_t(), static_cast<long>(m));
    d.normalize();
    return d.mul_pow2(e - 53);
  }

  const mpz_class& numerator() const { return num_; }
  std::uint64_t exponent() const { return exp_; }
  int sign() const { return sgn(num_); }
  bool is_zero() const { return sgn(num_) == 0; }

  Dyadic abs() const {
    Dyadic d = *this;
    d.num_ = ::abs(d.num_);
    return d;
  }

  // Multiply by 2^k.
  Dyadic mul_pow2(long k) const {
    Dyadic d = *this;
    if (d.is_zero()) return d;
    if (k >= 0) {
      auto uk = static_cast<std::uint64_t>(k);
      if (d.exp_ >= uk) {
        d.exp_ -= uk;
      } else {
        d.num_ <<= static_cast<mp_bitcnt_t>(uk - d.exp_);
        d.exp_ = 0;
      }
    } else {
      d.exp_ += static_cast<std::uint64_t>(-k);
      d.normalize();
    }
    return d;
  }

  // Largest dyadic with exponent <= n that is <= *this.
  Dyadic floor_to(std::uint64_t n) const {
    if (exp_ <= n) return *this;
    mpz_class q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), num_.get_mpz_t(), exp_ - n);
    return from_parts(q, n);
  }

  Dyadic ceil_to(std::uint64_t n) const {
    if (exp_ <= n) return *this;
    mpz_class q;
    mpz_cdiv_q_2exp(q.get_mpz_t(), num_.get_mpz_t(), exp_ - n);
    return from_parts(q, n);
  }

  // Nearest double, truncated toward zero; |x - to_double()| <= 2^-52 |x|
  // away from the subnormal range.
  double to_double() const {
    if (is_zero()) return 0.0;
    long e = 0;
    double m = mpz_get_d_2exp(&e, num_.get_mpz_t());
    return std::ldexp(m, static_cast<int>(e - static_cast<long>(exp_)));
  }

  // The double equal to this value, if one exists.
  std::optional<double> exact_double() const {
    double d = to_double();
    if (!std::isfinite(d)) return std::nullopt;
    if (d == 0.0 && !is_zero()) return std::nullopt;
    if (from_double(d) != *this) return std::nullopt;
    return d;
  }

  std::string str() const {
    if (exp_ == 0) return num_.get_str();
    return num_.get_str() + "/2^" + std::to_string(exp_);
  }

  // Parses "p/2^m" or a plain integer "p".
  static Dyadic parse(std::string_view s) {
    auto slash = s.find("/2^");
    std::string nums(s.substr(0, slash));
    mpz_class num;
    if (nums.empty() || num.set_str(nums, 10) != 0)
      throw InputError("malformed dyadic: '" + std::string(s) + "'");
    std::uint64_t m = 0;
    if (slash != std::string_view::npos) {
      auto es = s.substr(slash + 3);
      if (es.empty()) throw InputError("malformed dyadic: '" + std::string(s) + "'");
      for (char ch : es) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
          throw InputError("malformed dyadic: '" + std::string(s) + "'");
        m = m * 10 + static_cast<std::uint64_t>(ch - '0');
        if (m > (1u << 30)) throw InputError("dyadic exponent too large");
      }
    }
    return from_parts(num, m);
  }

  mpq_class to_mpq() const {
    mpz_class den = 1;
    den <<= static_cast<mp_bitcnt_t>(exp_);
    mpq_class q(num_, den);
    q.canonicalize();
    return q;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.exp_ == b.exp_) return from_parts(a.num_ + b.num_, a.exp_);
    if (a.exp_ > b.exp_) {
      mpz_class t = b.num_ << static_cast<mp_bitcnt_t>(a.exp_ - b.exp_);
      return from_parts(a.num_ + t, a.exp_);
    }
    mpz_class t = a.num_ << static_cast<mp_bitcnt_t>(b.exp_ - a.exp_);
    return from_parts(t + b.num_, b.exp_);
  }
  friend Dyadic operator-(const Dyadic& a) {
    Dyadic d = a;
    d.num_ = -d.num_;
    return d;
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return from_parts(a.num_ * b.num_, a.exp_ + b.exp_);
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int c;
    if (a.exp_ == b.exp_) {
      c = cmp(a.num_, b.num_);
    } else if (a.exp_ > b.exp_) {
      mpz_class t = b.num_ << static_cast<mp_bitcnt_t>(a.exp_ - b.exp_);
      c = cmp(a.num_, t);
    } else {
      mpz_class t = a.num_ << static_cast<mp_bitcnt_t>(b.exp_ - a.exp_);
      c = cmp(t, b.num_);
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }

 private:
  void normalize() {
    if (sgn(num_) == 0) {
      exp_ = 0;
      return;
    }
    if (exp_ == 0) return;
    std::uint64_t tz = mpz_scan1(num_.get_mpz_t(), 0);
    std::uint64_t s = tz < exp_ ? tz : exp_;
    if (s > 0) {
      mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), s);
      exp_ -= s;
    }
  }

  mpz_class num_ = 0;
  std::uint64_t exp_ = 0;
};

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

// Parses an exact rational: "p/2^m", "a/b", integer, or decimal with an
// optional exponent ("-1.25e-3").
inline mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  auto bad = [&]() { return InputError("malformed number: '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  if (s.find("/2^") != std::string::npos) return Dyadic::parse(s).to_mpq();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class p, q;
    if (p.set_str(s.substr(0, slash), 10) != 0 || q.set_str(s.substr(slash + 1), 10) != 0)
      throw bad();
    if (q == 0) throw InputError("zero denominator in '" + s + "'");
    mpq_class r(p, q);
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits += ch;
      any = true;
      if (seen_dot) ++frac;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw bad();
  long ex = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    std::string es = s.substr(i + 1);
    if (es.empty()) throw bad();
    std::size_t used = 0;
    try {
      ex = std::stol(es, &used);
    } catch (...) {
      throw bad();
    }
    if (used != es.size() || ex > 100000 || ex < -100000) throw bad();
  }
  mpz_class num(digits, 10);
  if (neg) num = -num;
  long p10 = ex - frac;
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(p10 < 0 ? -p10 : p10));
  mpq_class r = p10 < 0 ? mpq_class(num, ten) : mpq_class(num * ten);
  r.canonicalize();
  return r;
}

// Round-half-up to the grid 2^-n: |q - r| <= 2^-(n+1), exponent(r) <= n.
inline Dyadic round_rational(const mpq_class& q, std::uint64_t n) {
  mpz_class scaled_num = q.get_num() << static_cast<mp_bitcnt_t>(n + 1);
  mpz_class den = q.get_den() * 2;
  scaled_num += q.get_den();  // + 1/2 after the shift by one extra bit
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), scaled_num.get_mpz_t(), den.get_mpz_t());
  return Dyadic::from_parts(f, n);
}

inline Dyadic dyadic_round(std::string_view x, std::uint64_t n) {
  return round_rational(parse_rational(x), n);
}

inline std::optional<Dyadic> exact_dyadic(const mpq_class& q) {
  const mpz_class& den = q.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  return Dyadic::from_parts(q.get_num(), mpz_scan1(den.get_mpz_t(), 0));
}

// lo <= sqrt(x) <= hi with hi - lo <= 2^-bits; x >= 0.
inline std::pair<Dyadic, Dyadic> sqrt_bounds(const Dyadic& x, std::uint64_t bits) {
  if (x.sign() < 0) throw DomainError("sqrt of negative dyadic");
  if (x.is_zero()) return {Dyadic(), Dyadic()};
  std::uint64_t q = bits;
  if (2 * q < x.exponent()) q = (x.exponent() + 1) / 2;
  mpz_class X = x.numerator() << static_cast<mp_bitcnt_t>(2 * q - x.exponent());
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), X.get_mpz_t());
  Dyadic lo = Dyadic::from_parts(s, q);
  if (s * s == X) return {lo, lo};
  return {lo, Dyadic::from_parts(s + 1, q)};
}

}  // namespace juliacert
