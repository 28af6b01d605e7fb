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

// Polynomials with oracle coefficients and certified evaluation.

#pragma once

#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "juliacert/arith.hpp"
#include "juliacert/error.hpp"
#include "juliacert/oracle.hpp"

namespace juliacert {

// Coefficients a_0 .. a_d of p(z) = sum a_i z^i as complex oracles.
class PolyEnclosure {
 public:
  PolyEnclosure() = default;

  explicit PolyEnclosure(std::vector<ComplexOracle> coeffs)
      : coeffs_(std::move(coeffs)), cache_(std::make_shared<Cache>()) {
    if (coeffs_.size() < 3) throw DomainError("polynomial degree must be at least 2");
    // The leading coefficient must be certifiably nonzero.
    for (std::uint64_t n = 4; n <= 64; n += 4) {
      auto [x, y] = coeffs_.back().query(n);
      Dyadic r = Dyadic::pow2(-static_cast<long>(n));
      Box b = Box::around(x, y, r);
      if (b.mod2_lo().sign() > 0) return;
      if (coeffs_.back().is_exact()) break;
    }
    throw DomainError("leading coefficient cannot be certified nonzero");
  }

  // z^2 + c.
  static PolyEnclosure quadratic(ComplexOracle c) {
    return PolyEnclosure({std::move(c), ComplexOracle::exact(0, 0), ComplexOracle::exact(1, 0)});
  }
  static PolyEnclosure quadratic(const Dyadic& re, const Dyadic& im) {
    return quadratic(ComplexOracle::exact(re, im));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const ComplexOracle& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  const std::vector<ComplexOracle>& coeffs() const { return coeffs_; }

  // Monic quadratic without linear term: p(z) = z^2 + c.
  bool is_unicritical_quadratic() const {
    if (degree() != 2) return false;
    auto one = [](const RealOracle& o, long v) {
      return o.exact_value() && *o.exact_value() == Dyadic(v);
    };
    return one(coeffs_[2].re, 1) && one(coeffs_[2].im, 0) && one(coeffs_[1].re, 0) &&
           one(coeffs_[1].im, 0);
  }

  // Box of width <= 2^-(n-1) containing a_i.
  Box coefficient_box(int i, std::uint64_t n) const {
    const auto& c = coeff(i);
    auto [x, y] = c.query(n);
    Dyadic r = c.is_exact() ? Dyadic() : Dyadic::pow2(-static_cast<long>(n));
    return Box::around(x, y, r);
  }

  // Coefficient discs at double precision (queried to 2^-60).
  const std::vector<FBall>& fball_coeffs() const {
    std::call_once(cache_->fonce, [this] {
      for (int i = 0; i <= degree(); ++i) {
        const auto& c = coeff(i);
        auto [x, y] = c.query(60);
        Dyadic r = c.is_exact() ? Dyadic() : Dyadic::pow2(-60);
        cache_->f.push_back(FBall::from_dyadic(x, y, r));
      }
    });
    return cache_->f;
  }

  std::vector<MBall> mball_coeffs(mpfr_prec_t prec) const {
    std::lock_guard<std::mutex> lock(cache_->m);
    auto it = cache_->mb.find(prec);
    if (it != cache_->mb.end()) return it->second;
    std::vector<MBall> v;
    for (int i = 0; i <= degree(); ++i) {
      const auto& c = coeff(i);
      auto n = static_cast<std::uint64_t>(prec) + 4;
      auto [x, y] = c.query(n);
      Dyadic r = c.is_exact() ? Dyadic() : Dyadic::pow2(-static_cast<long>(n));
      v.push_back(MBall::from_dyadic(x, y, r, prec));
    }
    cache_->mb.emplace(prec, v);
    return v;
  }

  template <class B>
  std::vector<B> ball_coeffs(mpfr_prec_t prec) const;

 private:
  struct Cache {
    std::once_flag fonce;
    std::vector<FBall> f;
    std::mutex m;
    std::map<mpfr_prec_t, std::vector<MBall>> mb;
  };
  std::vector<ComplexOracle> coeffs_;
  std::shared_ptr<Cache> cache_;
};

template <>
inline std::vector<FBall> PolyEnclosure::ball_coeffs<FBall>(mpfr_prec_t) const {
  return fball_coeffs();
}
template <>
inline std::vector<MBall> PolyEnclosure::ball_coeffs<MBall>(mpfr_prec_t prec) const {
  return mball_coeffs(prec);
}

// Evaluation kernels over a fixed coefficient vector.
template <class B>
class Evaluator {
 public:
  Evaluator(const PolyEnclosure& p, mpfr_prec_t prec = 53)
      : a_(p.ball_coeffs<B>(prec)), unicritical_(p.is_unicritical_quadratic()) {
    for (std::size_t i = 1; i < a_.size(); ++i) da_.push_back(scale_by(a_[i], static_cast<double>(i)));
  }

  // Explicit coefficient discs a_0 .. a_d.
  Evaluator(std::vector<B> coeffs, bool unicritical)
      : a_(std::move(coeffs)), unicritical_(unicritical) {
    for (std::size_t i = 1; i < a_.size(); ++i) da_.push_back(scale_by(a_[i], static_cast<double>(i)));
  }

  B eval(const B& z) const {
    if (unicritical_) return sqr(z) + a_[0];
    B acc = a_.back();
    for (std::size_t i = a_.size() - 1; i-- > 0;) acc = acc * z + a_[i];
    return acc;
  }

  B deriv(const B& z) const {
    if (unicritical_) return z + z;
    B acc = da_.back();
    for (std::size_t i = da_.size() - 1; i-- > 0;) acc = acc * z + da_[i];
    return acc;
  }

  B second_deriv(const B& z) const {
    if (unicritical_) return two();
    // d^2/dz^2 = sum i (i-1) a_i z^(i-2)
    B acc = scale_by(da_.back(), static_cast<double>(da_.size() - 1));
    for (std::size_t i = da_.size() - 1; i-- > 1;)
      acc = acc * z + scale_by(da_[i], static_cast<double>(i));
    return acc;
  }

  const std::vector<B>& coeffs() const { return a_; }
  bool unicritical() const { return unicritical_; }
  const B& c() const { return a_[0]; }

 private:
  static B scale_by(const B& b, double k) {
    if constexpr (std::is_same_v<B, FBall>) {
      return scale(b, k);
    } else {
      return b * MBall::from_dyadic(Dyadic::from_double(k), Dyadic(), Dyadic(), b.prec());
    }
  }
  B two() const {
    if constexpr (std::is_same_v<B, FBall>) {
      return FBall::point(2, 0);
    } else {
      return MBall::from_dyadic(2, 0, 0, a_[0].prec());
    }
  }

  std::vector<B> a_;
  std::vector<B> da_;
  bool unicritical_;
};

// Precision cap for adaptive schedules; JULIA_MAX_BITS overrides 2^16.
inline std::uint64_t max_precision_bits() {
  if (const char* s = std::getenv("JULIA_MAX_BITS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && v >= 53) return v;
  }
  return 1u << 16;
}

// R with |p(z)| >= 2|z| whenever |z| >= R, hence K_p inside the open disc of
// radius R: R = max(2, (2 + sum_{i<d} |a_i|) / |a_d|), bounds taken at
// precision 16 and rounded up to the 2^-16 grid.
inline Dyadic escape_radius(const PolyEnclosure& p) {
  const std::uint64_t prec = 16;
  mpq_class s = 2;
  for (int i = 0; i < p.degree(); ++i) {
    Box b = p.coefficient_box(i, prec);
    s += sqrt_bounds(b.mod2_hi(), prec).second.to_mpq();
  }
  Box lead = p.coefficient_box(p.degree(), prec);
  Dyadic lo = sqrt_bounds(lead.mod2_lo(), prec).first;
  if (lo.sign() <= 0) throw DomainError("leading coefficient too small to bound");
  mpq_class r = s / lo.to_mpq();
  // ceil onto the 2^-16 grid
  mpz_class scaled = r.get_num() << prec;
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), r.get_den().get_mpz_t());
  Dyadic R = Dyadic::from_parts(q, prec);
  return max(R, Dyadic(2));
}

namespace detail {

template <class B>
B ball_from_box(const Box& z, mpfr_prec_t prec) {
  if constexpr (std::is_same_v<B, FBall>) {
    (void)prec;
    return FBall::from_box(z);
  } else {
    return MBall::from_box(z, prec);
  }
}

template <class B>
double ball_rad(const B& b) {
  if constexpr (std::is_same_v<B, FBall>) {
    return b.rad;
  } else {
    return b.rad_hi();
  }
}

inline double box_width_d(const Box& b) { return b.width().to_double(); }

}  // namespace detail

// Box containing p(z) for every z in the box.
inline Box enclose_eval(const PolyEnclosure& p, const Box& z, std::uint64_t n) {
  if (n <= 45) return Evaluator<FBall>(p).eval(FBall::from_box(z)).to_box();
  auto prec = static_cast<mpfr_prec_t>(n + 16);
  return Evaluator<MBall>(p, prec).eval(MBall::from_box(z, prec)).to_box();
}

// Box containing p^k(z) for z in the box. Working precision starts at n+8
// bits and doubles while the result is wider than 2^-n and still improving.
// Throws WidthBlowup once an iterate's diameter exceeds 2R + 1.
inline Box enclose_orbit(const PolyEnclosure& p, const Box& z, int k, std::uint64_t n) {
  const double guard = escape_radius(p).to_double() * 2 + 1;
  const double target = std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(n, 1000)));
  const std::uint64_t cap = max_precision_bits();
  double prev_width = std::numeric_limits<double>::infinity();
  for (std::uint64_t bits = n + 8;; bits *= 2) {
    Box out;
    auto run = [&](auto tag) {
      using B = decltype(tag);
      auto prec = static_cast<mpfr_prec_t>(bits);
      Evaluator<B> ev(p, prec);
      B w = detail::ball_from_box<B>(z, prec);
      for (int i = 0; i < k; ++i) {
        w = ev.eval(w);
        if (!w.finite() || 2 * detail::ball_rad(w) > guard)
          throw WidthBlowup("orbit enclosure wider than the escape disc after " +
                            std::to_string(i + 1) + " steps");
      }
      out = w.to_box();
    };
    if (bits <= 50) {
      run(FBall{});
    } else {
      run(MBall{});
    }
    double w = detail::box_width_d(out);
    if (w <= target || bits * 2 > cap || w > prev_width * 0.75) return out;
    prev_width = w;
  }
}

// Dyadic w with |w - p^k(z)| < 2^-m, z given by an oracle.
inline std::pair<Dyadic, Dyadic> orbit_approx(const PolyEnclosure& p, const ComplexOracle& z,
                                              int k, std::uint64_t m) {
  const std::uint64_t cap = max_precision_bits();
  const double target = std::ldexp(1.0, -static_cast<int>(m) - 1);
  for (std::uint64_t bits = m + 8; bits <= cap; bits *= 2) {
    auto [x, y] = z.query(bits);
    Dyadic r = z.is_exact() ? Dyadic() : Dyadic::pow2(-static_cast<long>(bits));
    Box out;
    bool ok = true;
    auto run = [&](auto tag) {
      using B = decltype(tag);
      auto prec = static_cast<mpfr_prec_t>(bits + 8);
      Evaluator<B> ev(p, prec);
      B w = detail::ball_from_box<B>(Box::around(x, y, r), prec);
      for (int i = 0; i < k && ok; ++i) {
        w = ev.eval(w);
        if (!w.finite() || detail::ball_rad(w) > 1e300) ok = false;
      }
      if (ok) out = w.to_box();
    };
    if (bits + 8 <= 50 && m <= 40) {
      run(FBall{});
    } else {
      run(MBall{});
    }
    if (!ok) continue;
    // box half-width below 2^-(m+1) in each axis gives distance < 2^-m after
    // rounding the center to the 2^-(m+3) grid.
    Dyadic hw = out.width().mul_pow2(-1);
    if (hw.to_double() * 1.5 < target) {
      Dyadic cx = out.center_re(), cy = out.center_im();
      Dyadic h = Dyadic::pow2(-static_cast<long>(m) - 4);
      return {(cx + h).floor_to(m + 3), (cy + h).floor_to(m + 3)};
    }
  }
  throw WidthBlowup("orbit approximation needs more than the precision cap");
}

}  // namespace juliacert
