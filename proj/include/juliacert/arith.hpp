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

// Rigorous complex enclosures.
//
// Box: axis-aligned rectangle with dyadic endpoints; the public exchange type.
// FBall: disc with double center and radius. Every operation returns a disc
//   containing all exact results; rounding errors of the center computation
//   are bounded a priori (each correctly rounded op errs by at most 2^-53 of
//   its result) and folded into the radius, which is itself rounded up.
// MBall: the same with MPFR centers of arbitrary precision.

#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "juliacert/dyadic.hpp"
#include "juliacert/error.hpp"

namespace juliacert {

struct Box {
  Dyadic re_lo, re_hi, im_lo, im_hi;

  static Box point(const Dyadic& x, const Dyadic& y) { return {x, x, y, y}; }
  static Box around(const Dyadic& x, const Dyadic& y, const Dyadic& r) {
    return {x - r, x + r, y - r, y + r};
  }

  Dyadic width() const { return max(re_hi - re_lo, im_hi - im_lo); }
  Dyadic center_re() const { return (re_lo + re_hi).mul_pow2(-1); }
  Dyadic center_im() const { return (im_lo + im_hi).mul_pow2(-1); }
  bool contains(const Dyadic& x, const Dyadic& y) const {
    return re_lo <= x && x <= re_hi && im_lo <= y && y <= im_hi;
  }
  bool contains(const Box& o) const {
    return re_lo <= o.re_lo && o.re_hi <= re_hi && im_lo <= o.im_lo && o.im_hi <= im_hi;
  }
  bool meets(const Box& o) const {
    return !(o.re_hi < re_lo || re_hi < o.re_lo || o.im_hi < im_lo || im_hi < o.im_lo);
  }
  // Exact squared modulus bounds over the box.
  Dyadic mod2_lo() const {
    auto clamp0 = [](const Dyadic& lo, const Dyadic& hi) {
      if (lo.sign() > 0) return lo;
      if (hi.sign() < 0) return -hi;
      return Dyadic();
    };
    Dyadic x = clamp0(re_lo, re_hi), y = clamp0(im_lo, im_hi);
    return x * x + y * y;
  }
  Dyadic mod2_hi() const {
    Dyadic x = max(re_lo.abs(), re_hi.abs()), y = max(im_lo.abs(), im_hi.abs());
    return x * x + y * y;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

namespace fp {

inline constexpr double kU = 0x1p-52;      // generous unit roundoff bound
inline constexpr double kTiny = 0x1p-1020;  // absorbs underflow
inline double up(double x) { return x * (1 + 0x1p-47) + kTiny; }
inline double down(double x) { return x - std::abs(x) * 0x1p-47 - kTiny; }

}  // namespace fp

struct FBall {
  double re = 0, im = 0, rad = 0;

  static FBall point(double x, double y) { return {x, y, 0}; }
  static FBall point(std::complex<double> z) { return {z.real(), z.imag(), 0}; }

  // Disc containing the closed disc of radius r about (x, y), exact data.
  static FBall from_dyadic(const Dyadic& x, const Dyadic& y, const Dyadic& r = Dyadic()) {
    FBall b;
    double ex = 0;
    b.re = conv(x, ex);
    b.im = conv(y, ex);
    double rr = r.to_double();
    if (!r.exact_double()) rr = fp::up(rr * (1 + 0x1p-50));
    b.rad = rr + ex == 0 ? 0 : fp::up(rr + ex);
    return b;
  }

  static FBall from_box(const Box& bx) {
    Dyadic cx = bx.center_re(), cy = bx.center_im();
    Dyadic hx = (bx.re_hi - bx.re_lo).mul_pow2(-1), hy = (bx.im_hi - bx.im_lo).mul_pow2(-1);
    FBall b;
    double ex = 0;
    b.re = conv(cx, ex);
    b.im = conv(cy, ex);
    double dx = fp::up(hx.to_double() * (1 + 0x1p-50));
    double dy = fp::up(hy.to_double() * (1 + 0x1p-50));
    double h = (dx == 0 && dy == 0) ? 0 : fp::up(std::sqrt(dx * dx + dy * dy));
    b.rad = (h == 0 && ex == 0) ? 0 : fp::up(h + ex);
    return b;
  }

  Box to_box() const {
    Dyadic x = Dyadic::from_double(re), y = Dyadic::from_double(im);
    Dyadic r = Dyadic::from_double(rad);
    return {x - r, x + r, y - r, y + r};
  }

  std::complex<double> mid() const { return {re, im}; }
  bool finite() const { return std::isfinite(re) && std::isfinite(im) && std::isfinite(rad); }

  double center_mag_hi() const { return fp::up(std::sqrt(re * re + im * im)); }
  double center_mag_lo() const { return std::max(0.0, fp::down(std::sqrt(re * re + im * im))); }
  double mag_hi() const { return fp::up(center_mag_hi() + rad); }
  double mag_lo() const { return std::max(0.0, fp::down(center_mag_lo() - rad)); }

  // Upper bound on the distance between centers.
  static double center_dist_hi(const FBall& a, double x, double y) {
    double dx = a.re - x, dy = a.im - y;
    return fp::up(fp::up(std::sqrt(dx * dx + dy * dy)) + (std::abs(dx) + std::abs(dy)) * fp::kU);
  }
  static double center_dist_lo(const FBall& a, double x, double y) {
    double dx = a.re - x, dy = a.im - y;
    return std::max(
        0.0, fp::down(fp::down(std::sqrt(dx * dx + dy * dy)) - (std::abs(dx) + std::abs(dy)) * fp::kU));
  }
  // This disc lies in the open disc of radius R about (x, y).
  bool inside_open(double x, double y, double R) const {
    return fp::up(center_dist_hi(*this, x, y) + rad) < R;
  }
  bool inside_closed(double x, double y, double R) const {
    return fp::up(center_dist_hi(*this, x, y) + rad) <= R;
  }
  bool contains_zero() const { return center_mag_lo() <= rad; }

 private:
  static double conv(const Dyadic& v, double& err) {
    double d = v.to_double();
    if (!v.exact_double()) err += std::abs(d) * 0x1p-51 + fp::kTiny;
    return d;
  }
};

inline FBall operator+(const FBall& a, const FBall& b) {
  double re = a.re + b.re, im = a.im + b.im;
  double e = (std::abs(re) + std::abs(im)) * fp::kU;
  double r = a.rad + b.rad + e;
  return {re, im, r == 0 ? 0 : fp::up(r)};
}
inline FBall operator-(const FBall& a) { return {-a.re, -a.im, a.rad}; }
inline FBall operator-(const FBall& a, const FBall& b) { return a + (-b); }

inline FBall operator*(const FBall& a, const FBall& b) {
  double t1 = a.re * b.re, t2 = a.im * b.im, t3 = a.re * b.im, t4 = a.im * b.re;
  double re = t1 - t2, im = t3 + t4;
  double e = (std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(re) +
              std::abs(im)) *
             fp::kU;
  double r = e;
  if (a.rad != 0 || b.rad != 0)
    r += a.center_mag_hi() * b.rad + b.center_mag_hi() * a.rad + a.rad * b.rad;
  return {re, im, r == 0 ? 0 : fp::up(r)};
}

inline FBall sqr(const FBall& a) {
  double t1 = a.re * a.re, t2 = a.im * a.im, t3 = a.re * a.im;
  double re = t1 - t2, im = 2 * t3;
  double e = (t1 + t2 + 2 * std::abs(t3) + std::abs(re)) * fp::kU;
  double r = e;
  if (a.rad != 0) r += 2 * a.center_mag_hi() * a.rad + a.rad * a.rad;
  return {re, im, r == 0 ? 0 : fp::up(r)};
}

inline FBall scale(const FBall& a, double k) {  // k an exact double
  double re = a.re * k, im = a.im * k;
  double e = (std::abs(re) + std::abs(im)) * fp::kU;
  double r = a.rad * std::abs(k) + e;
  return {re, im, r == 0 ? 0 : fp::up(r)};
}

inline FBall inflate(const FBall& a, double extra) { return {a.re, a.im, fp::up(a.rad + extra)}; }

// ---------------------------------------------------------------------------
// MPFR-centered balls. Radii are kept as 64-bit MPFR values rounded upward so
// they never underflow.

class MBall {
 public:
  explicit MBall(mpfr_prec_t prec = 64) : prec_(prec) {
    mpfr_init2(re_, prec);
    mpfr_init2(im_, prec);
    mpfr_init2(rad_, 64);
    mpfr_set_zero(re_, 1);
    mpfr_set_zero(im_, 1);
    mpfr_set_zero(rad_, 1);
  }
  MBall(const MBall& o) : MBall(o.prec_) { set(o); }
  MBall& operator=(const MBall& o) {
    if (this != &o) {
      if (prec_ != o.prec_) {
        prec_ = o.prec_;
        mpfr_set_prec(re_, prec_);
        mpfr_set_prec(im_, prec_);
      }
      set(o);
    }
    return *this;
  }
  ~MBall() {
    mpfr_clear(re_);
    mpfr_clear(im_);
    mpfr_clear(rad_);
  }

  static MBall from_dyadic(const Dyadic& x, const Dyadic& y, const Dyadic& r, mpfr_prec_t prec) {
    MBall b(prec);
    mpfr_t t;
    mpfr_init2(t, 64);
    set_dyadic(b.re_, x, t);
    mpfr_set(b.rad_, t, MPFR_RNDU);
    set_dyadic(b.im_, y, t);
    mpfr_add(b.rad_, b.rad_, t, MPFR_RNDU);
    set_dyadic_up(t, r);
    mpfr_add(b.rad_, b.rad_, t, MPFR_RNDU);
    mpfr_clear(t);
    return b;
  }
  static MBall from_box(const Box& bx, mpfr_prec_t prec) {
    Dyadic hx = (bx.re_hi - bx.re_lo).mul_pow2(-1), hy = (bx.im_hi - bx.im_lo).mul_pow2(-1);
    // half-diagonal <= hx + hy
    return from_dyadic(bx.center_re(), bx.center_im(), hx + hy, prec);
  }

  mpfr_prec_t prec() const { return prec_; }
  double rad_hi() const { return mpfr_get_d(rad_, MPFR_RNDU); }
  double re_approx() const { return mpfr_get_d(re_, MPFR_RNDN); }
  double im_approx() const { return mpfr_get_d(im_, MPFR_RNDN); }
  bool finite() const { return mpfr_number_p(re_) && mpfr_number_p(im_) && mpfr_number_p(rad_); }

  // Double disc containing this ball (outward rounded).
  FBall to_fball() const {
    double x = mpfr_get_d(re_, MPFR_RNDN), y = mpfr_get_d(im_, MPFR_RNDN);
    mpfr_t t, u;
    mpfr_init2(t, 64);
    mpfr_init2(u, 64);
    mpfr_sub_d(t, re_, x, MPFR_RNDU);
    mpfr_abs(t, t, MPFR_RNDU);
    mpfr_sub_d(u, im_, y, MPFR_RNDU);
    mpfr_abs(u, u, MPFR_RNDU);
    mpfr_add(t, t, u, MPFR_RNDU);
    mpfr_add(t, t, rad_, MPFR_RNDU);
    double r = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    mpfr_clear(u);
    // |a - x| rounded up at 64 bits may still undercount by one ulp of 64 bits.
    return {x, y, fp::up(r * (1 + 0x1p-60))};
  }

  Box to_box() const {
    Dyadic x = to_dyadic(re_), y = to_dyadic(im_), r = to_dyadic(rad_);
    return {x - r, x + r, y - r, y + r};
  }

  double mag_hi() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    center_mag(t, MPFR_RNDU);
    mpfr_add(t, t, rad_, MPFR_RNDU);
    double d = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return d;
  }
  double mag_lo() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    center_mag(t, MPFR_RNDD);
    mpfr_sub(t, t, rad_, MPFR_RNDD);
    double d = std::max(0.0, mpfr_get_d(t, MPFR_RNDD));
    mpfr_clear(t);
    return d;
  }

  friend MBall operator+(const MBall& a, const MBall& b) {
    MBall r(std::max(a.prec_, b.prec_));
    mpfr_add(r.re_, a.re_, b.re_, MPFR_RNDN);
    mpfr_add(r.im_, a.im_, b.im_, MPFR_RNDN);
    mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
    r.add_rounding_error(r.re_, r.im_);
    return r;
  }
  friend MBall operator-(const MBall& a) {
    MBall r = a;
    mpfr_neg(r.re_, r.re_, MPFR_RNDN);
    mpfr_neg(r.im_, r.im_, MPFR_RNDN);
    return r;
  }
  friend MBall operator-(const MBall& a, const MBall& b) { return a + (-b); }

  friend MBall operator*(const MBall& a, const MBall& b) {
    mpfr_prec_t p = std::max(a.prec_, b.prec_);
    MBall r(p);
    mpfr_t t1, t2, t3, t4, e;
    mpfr_inits2(p, t1, t2, t3, t4, static_cast<mpfr_ptr>(nullptr));
    mpfr_init2(e, 64);
    mpfr_mul(t1, a.re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, a.im_, b.im_, MPFR_RNDN);
    mpfr_mul(t3, a.re_, b.im_, MPFR_RNDN);
    mpfr_mul(t4, a.im_, b.re_, MPFR_RNDN);
    mpfr_sub(r.re_, t1, t2, MPFR_RNDN);
    mpfr_add(r.im_, t3, t4, MPFR_RNDN);
    // Center error <= 2^(1-p) (|t1|+|t2|+|t3|+|t4|) + 2^(1-p)(|re|+|im|).
    mpfr_set_zero(e, 1);
    for (mpfr_ptr x : {t1, t2, t3, t4}) add_abs(e, x);
    add_abs(e, r.re_);
    add_abs(e, r.im_);
    mpfr_mul_2si(e, e, 1 - static_cast<long>(p), MPFR_RNDU);
    mpfr_set(r.rad_, e, MPFR_RNDU);
    if (!mpfr_zero_p(a.rad_) || !mpfr_zero_p(b.rad_)) {
      mpfr_t ma, mb;
      mpfr_inits2(64, ma, mb, static_cast<mpfr_ptr>(nullptr));
      a.center_mag(ma, MPFR_RNDU);
      b.center_mag(mb, MPFR_RNDU);
      mpfr_mul(ma, ma, b.rad_, MPFR_RNDU);
      mpfr_mul(mb, mb, a.rad_, MPFR_RNDU);
      mpfr_add(r.rad_, r.rad_, ma, MPFR_RNDU);
      mpfr_add(r.rad_, r.rad_, mb, MPFR_RNDU);
      mpfr_mul(ma, a.rad_, b.rad_, MPFR_RNDU);
      mpfr_add(r.rad_, r.rad_, ma, MPFR_RNDU);
      mpfr_clears(ma, mb, static_cast<mpfr_ptr>(nullptr));
    }
    mpfr_clears(t1, t2, t3, t4, e, static_cast<mpfr_ptr>(nullptr));
    return r;
  }

  friend MBall sqr(const MBall& a) { return a * a; }

  MBall with_extra_radius(double extra) const {
    MBall r = *this;
    mpfr_add_d(r.rad_, r.rad_, extra, MPFR_RNDU);
    return r;
  }

 private:
  void set(const MBall& o) {
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
    if (o.prec_ > prec_) add_rounding_error(re_, im_);
  }
  // Adds 2^(1-p)(|re|+|im|), the error of the last rounding of each part.
  void add_rounding_error(mpfr_srcptr re, mpfr_srcptr im) {
    mpfr_t e;
    mpfr_init2(e, 64);
    mpfr_abs(e, re, MPFR_RNDU);
    mpfr_t f;
    mpfr_init2(f, 64);
    mpfr_abs(f, im, MPFR_RNDU);
    mpfr_add(e, e, f, MPFR_RNDU);
    mpfr_mul_2si(e, e, 1 - static_cast<long>(prec_), MPFR_RNDU);
    mpfr_add(rad_, rad_, e, MPFR_RNDU);
    mpfr_clear(e);
    mpfr_clear(f);
  }
  static void add_abs(mpfr_ptr acc, mpfr_srcptr x) {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, x, MPFR_RNDU);
    mpfr_add(acc, acc, t, MPFR_RNDU);
    mpfr_clear(t);
  }
  void center_mag(mpfr_ptr out, mpfr_rnd_t rnd) const {
    mpfr_t a, b;
    mpfr_inits2(64, a, b, static_cast<mpfr_ptr>(nullptr));
    mpfr_sqr(a, re_, rnd);
    mpfr_sqr(b, im_, rnd);
    mpfr_add(a, a, b, rnd);
    mpfr_sqrt(out, a, rnd);
    mpfr_clears(a, b, static_cast<mpfr_ptr>(nullptr));
  }
  // Sets dst to x rounded to nearest; err receives an upper bound of the
  // rounding error.
  static void set_dyadic(mpfr_ptr dst, const Dyadic& x, mpfr_ptr err) {
    mpfr_set_z_2exp(dst, x.numerator().get_mpz_t(), -static_cast<mpfr_exp_t>(x.exponent()),
                    MPFR_RNDN);
    mpfr_set_zero(err, 1);
    if (x.numerator() != 0 && static_cast<mpfr_prec_t>(mpz_sizeinbase(x.numerator().get_mpz_t(), 2)) >
                                  mpfr_get_prec(dst)) {
      mpfr_abs(err, dst, MPFR_RNDU);
      mpfr_mul_2si(err, err, 1 - static_cast<long>(mpfr_get_prec(dst)), MPFR_RNDU);
    }
  }
  static void set_dyadic_up(mpfr_ptr dst, const Dyadic& x) {
    mpfr_set_z_2exp(dst, x.numerator().get_mpz_t(), -static_cast<mpfr_exp_t>(x.exponent()),
                    MPFR_RNDU);
  }
  static Dyadic to_dyadic(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return Dyadic();
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    return Dyadic::from_parts(m, 0).mul_pow2(e);
  }

  mpfr_prec_t prec_;
  mpfr_t re_, im_, rad_;
};

// Squared-modulus classification helpers on exact boxes.
inline bool box_mod_gt1(const Box& b) { return b.mod2_lo() > Dyadic(1); }
inline bool box_mod_lt1(const Box& b) { return b.mod2_hi() < Dyadic(1); }

}  // namespace juliacert
