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

// Oracles for real and complex numbers: n -> dyadic within 2^-n.

#pragma once

#include <mpfr.h>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "juliacert/dyadic.hpp"

namespace juliacert {

// Answers query(n) with a dyadic r such that |x - r| < 2^-n. Answers are
// memoized, so repeated queries agree, and the object is safe to share
// between threads.
class RealOracle {
 public:
  using Supplier = std::function<Dyadic(std::uint64_t)>;

  RealOracle() : RealOracle(exact(Dyadic())) {}
  explicit RealOracle(Supplier f, std::string label = "oracle")
      : s_(std::make_shared<State>()) {
    s_->f = std::move(f);
    s_->label = std::move(label);
  }

  static RealOracle exact(Dyadic v) {
    RealOracle o([v](std::uint64_t) { return v; }, v.str());
    o.s_->exact = std::move(v);
    return o;
  }

  static RealOracle rational(const mpq_class& q) {
    if (auto d = exact_dyadic(q)) return exact(*d);
    return RealOracle([q](std::uint64_t n) { return round_rational(q, n + 1); }, q.get_str());
  }

  Dyadic query(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(s_->m);
    if (s_->exact) return *s_->exact;
    auto it = s_->memo.find(n);
    if (it != s_->memo.end()) return it->second;
    Dyadic v = s_->f(n);
    s_->memo.emplace(n, v);
    return v;
  }

  const std::optional<Dyadic>& exact_value() const { return s_->exact; }
  const std::string& label() const { return s_->label; }

 private:
  struct State {
    Supplier f;
    std::string label;
    std::optional<Dyadic> exact;
    std::mutex m;
    std::map<std::uint64_t, Dyadic> memo;
  };
  std::shared_ptr<State> s_;
};

struct ComplexOracle {
  RealOracle re;
  RealOracle im;

  static ComplexOracle exact(Dyadic x, Dyadic y) {
    return {RealOracle::exact(std::move(x)), RealOracle::exact(std::move(y))};
  }
  bool is_exact() const { return re.exact_value() && im.exact_value(); }
  std::pair<Dyadic, Dyadic> query(std::uint64_t n) const { return {re.query(n), im.query(n)}; }
};

namespace oracles {

namespace detail {

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

inline Dyadic to_dyadic(const mpfr_t x) {
  if (mpfr_zero_p(x)) return Dyadic();
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  return Dyadic::from_parts(m, 0).mul_pow2(e);
}

// Rounds an mpfr value, accurate to far better than 2^-(n+2), onto the
// 2^-(n+2) grid.
inline Dyadic round_mpfr(const mpfr_t x, std::uint64_t n) {
  Dyadic d = to_dyadic(x);
  return (d + Dyadic::pow2(-static_cast<long>(n) - 3)).floor_to(n + 2);
}

// Golden-mean rotation number data. With ~10 correctly rounded operations on
// quantities of modulus <= 4 and 40 guard bits, the accumulated error is far
// below 2^-(n+3); the final rounding adds at most 2^-(n+3).
inline void golden(std::uint64_t n, bool want_c, Dyadic& re, Dyadic& im) {
  mpfr_prec_t p = static_cast<mpfr_prec_t>(n + 48);
  Mpfr theta(p), pi2(p), a(p), cs(p), sn(p), c2(p), s2(p), t(p);
  mpfr_sqrt_ui(theta.v, 5, MPFR_RNDN);
  mpfr_sub_ui(theta.v, theta.v, 1, MPFR_RNDN);
  mpfr_div_2ui(theta.v, theta.v, 1, MPFR_RNDN);
  mpfr_const_pi(pi2.v, MPFR_RNDN);
  mpfr_mul_2ui(pi2.v, pi2.v, 1, MPFR_RNDN);
  mpfr_mul(a.v, pi2.v, theta.v, MPFR_RNDN);
  mpfr_sin_cos(sn.v, cs.v, a.v, MPFR_RNDN);
  if (!want_c) {
    // alpha = mu / 2
    mpfr_div_2ui(cs.v, cs.v, 1, MPFR_RNDN);
    mpfr_div_2ui(sn.v, sn.v, 1, MPFR_RNDN);
    re = round_mpfr(cs.v, n);
    im = round_mpfr(sn.v, n);
    return;
  }
  // c = mu/2 - mu^2/4, mu^2 = cos 2a + i sin 2a.
  mpfr_mul_2ui(t.v, a.v, 1, MPFR_RNDN);
  mpfr_sin_cos(s2.v, c2.v, t.v, MPFR_RNDN);
  mpfr_div_2ui(cs.v, cs.v, 1, MPFR_RNDN);
  mpfr_div_2ui(c2.v, c2.v, 2, MPFR_RNDN);
  mpfr_sub(cs.v, cs.v, c2.v, MPFR_RNDN);
  mpfr_div_2ui(sn.v, sn.v, 1, MPFR_RNDN);
  mpfr_div_2ui(s2.v, s2.v, 2, MPFR_RNDN);
  mpfr_sub(sn.v, sn.v, s2.v, MPFR_RNDN);
  re = round_mpfr(cs.v, n);
  im = round_mpfr(sn.v, n);
}

}  // namespace detail

inline RealOracle pi() {
  return RealOracle(
      [](std::uint64_t n) {
        detail::Mpfr p(static_cast<mpfr_prec_t>(n + 16));
        mpfr_const_pi(p.v, MPFR_RNDN);
        return detail::round_mpfr(p.v, n);
      },
      "pi");
}

inline RealOracle sqrt_of(std::uint64_t k) {
  return RealOracle(
      [k](std::uint64_t n) {
        detail::Mpfr p(static_cast<mpfr_prec_t>(n + 16));
        mpfr_sqrt_ui(p.v, k, MPFR_RNDN);
        return detail::round_mpfr(p.v, n);
      },
      "sqrt(" + std::to_string(k) + ")");
}

// The quadratic parameter whose fixed point has multiplier exp(2 pi i theta),
// theta the golden mean (sqrt 5 - 1) / 2.
inline ComplexOracle golden_siegel_c() {
  auto part = [](bool real) {
    return RealOracle(
        [real](std::uint64_t n) {
          Dyadic re, im;
          detail::golden(n, true, re, im);
          return real ? re : im;
        },
        real ? "golden-siegel-c.re" : "golden-siegel-c.im");
  };
  return {part(true), part(false)};
}

// The indifferent fixed point of z^2 + golden_siegel_c().
inline ComplexOracle golden_siegel_alpha() {
  auto part = [](bool real) {
    return RealOracle(
        [real](std::uint64_t n) {
          Dyadic re, im;
          detail::golden(n, false, re, im);
          return real ? re : im;
        },
        real ? "golden-siegel-alpha.re" : "golden-siegel-alpha.im");
  };
  return {part(true), part(false)};
}

// Named oracles usable from input files ("oracle:<id>").
inline std::optional<ComplexOracle> named(const std::string& id) {
  if (id == "golden-siegel-c") return golden_siegel_c();
  if (id == "golden-siegel-alpha") return golden_siegel_alpha();
  if (id == "pi") return ComplexOracle{pi(), RealOracle::exact(Dyadic())};
  return std::nullopt;
}

}  // namespace oracles

}  // namespace juliacert
