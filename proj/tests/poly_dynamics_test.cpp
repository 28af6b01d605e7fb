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

#include <gtest/gtest.h>

#include <random>

#include "juliacert/input.hpp"
#include "juliacert/poly.hpp"
#include "test_util.hpp"

using namespace juliacert;

namespace {

PolyEnclosure quad(long re_num, unsigned re_exp, long im_num = 0, unsigned im_exp = 0) {
  return PolyEnclosure::quadratic(Dyadic::from_parts(re_num, re_exp), Dyadic::from_parts(im_num, im_exp));
}

bool box_contains_q(const Box& b, const mpq_class& x, const mpq_class& y) {
  return b.re_lo.to_mpq() <= x && x <= b.re_hi.to_mpq() && b.im_lo.to_mpq() <= y && y <= b.im_hi.to_mpq();
}

// Exact rational square plus c.
std::pair<mpq_class, mpq_class> quad_exact(const mpq_class& x, const mpq_class& y, const mpq_class& cx,
                                           const mpq_class& cy) {
  return {x * x - y * y + cx, 2 * x * y + cy};
}

}  // namespace

TEST(EncloseEval, PointExamples) {
  Box one = enclose_eval(quad(0, 0), Box::point(1, 0), 20);
  EXPECT_TRUE(one.contains(Dyadic(1), Dyadic()));
  EXPECT_LE(one.width(), Dyadic::pow2(-18));
  Box m1 = enclose_eval(quad(-1, 0), Box::point(0, 0), 20);
  EXPECT_TRUE(m1.contains(Dyadic(-1), Dyadic()));
}

TEST(EncloseEval, SquarePlusIOverSmallBox) {
  PolyEnclosure p = quad(0, 0, 1, 0);
  Box z{Dyadic(), Dyadic::pow2(-2), Dyadic(), Dyadic::pow2(-2)};
  Box out = enclose_eval(p, z, 20);
  // Oracle: 10^3 sample points w (exact rationals on a 2^-10 lattice), exact w^2 + i.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> u(0, 256);
  for (int i = 0; i < 1000; ++i) {
    mpq_class x(u(rng), 1024), y(u(rng), 1024);
    auto [wx, wy] = quad_exact(x, y, 0, 1);
    EXPECT_TRUE(box_contains_q(out, wx, wy)) << i;
  }
  // Corners of the range are attained.
  EXPECT_TRUE(box_contains_q(out, mpq_class(1, 16), 1));
  EXPECT_TRUE(box_contains_q(out, mpq_class(-1, 16), 1));
  EXPECT_TRUE(box_contains_q(out, 0, mpq_class(9, 8)));
}

TEST(EncloseEval, WidthShrinks) {
  PolyEnclosure p = quad(-3, 2, 1, 3);
  Dyadic prev = Dyadic(100);
  for (long e = 2; e <= 40; e += 6) {
    Box b = enclose_eval(p, Box::around(Dyadic::from_parts(1, 1), Dyadic::from_parts(1, 2), Dyadic::pow2(-e)),
                         static_cast<std::uint64_t>(e + 4));
    EXPECT_LT(b.width(), prev);
    prev = b.width();
  }
  EXPECT_LT(prev, Dyadic::pow2(-35));
}

TEST(EscapeRadius, Examples) {
  EXPECT_EQ(escape_radius(quad(0, 0)), Dyadic(2));
  EXPECT_EQ(escape_radius(quad(-1, 0)), Dyadic(3));
  // (2 + 100) / 1 under the library's rule.
  EXPECT_EQ(escape_radius(quad(100, 0)), Dyadic(102));
}

TEST(EscapeRadius, Soundness) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> cc(-64, 64);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI);
  for (int t = 0; t < 20; ++t) {
    mpq_class cx(cc(rng), 16), cy(cc(rng), 16);
    PolyEnclosure p = PolyEnclosure::quadratic(*exact_dyadic(cx), *exact_dyadic(cy));
    double R = escape_radius(p).to_double();
    for (int i = 0; i < 50; ++i) {
      double a = ang(rng);
      std::complex<double> z = std::polar(R, a), c(cx.get_d(), cy.get_d());
      EXPECT_GE(std::abs(z * z + c), 2 * R * (1 - 1e-12));
    }
  }
  // A cubic with complex coefficients: 2 z^3 - z + (1/2) i.
  PolyEnclosure cubic({ComplexOracle::exact(0, Dyadic::from_parts(1, 1)), ComplexOracle::exact(-1, 0),
                       ComplexOracle::exact(0, 0), ComplexOracle::exact(2, 0)});
  double R = escape_radius(cubic).to_double();
  for (int i = 0; i < 1000; ++i) {
    std::complex<double> z = std::polar(R, ang(rng));
    std::complex<double> w = 2.0 * z * z * z - z + std::complex<double>(0, 0.5);
    EXPECT_GE(std::abs(w), 2 * R * (1 - 1e-12));
  }
}

TEST(EncloseOrbit, Examples) {
  Box a = enclose_orbit(quad(0, 0), Box::point(2, 0), 3, 10);
  EXPECT_TRUE(a.contains(Dyadic(256), Dyadic()));
  Box b = enclose_orbit(quad(-1, 0), Box::point(0, 0), 2, 10);
  EXPECT_TRUE(b.contains(Dyadic(), Dyadic()));
}

TEST(EncloseOrbit, WideBoxBlowsUpOrContainsCorners) {
  Box z{Dyadic::from_double(0.9), Dyadic::from_double(1.1), Dyadic::from_double(0.9), Dyadic::from_double(1.1)};
  try {
    Box out = enclose_orbit(quad(0, 0), z, 8, 4);
    // Oracle: exact corner images (0.9+0.9i)^256 and (1.1+1.1i)^256.
    for (double v : {0.9, 1.1}) {
      std::complex<double> w = std::pow(std::complex<double>(v, v), 256);
      EXPECT_TRUE(out.contains(Dyadic::from_double(w.real()), Dyadic::from_double(w.imag())));
    }
  } catch (const WidthBlowup&) {
    SUCCEED();
  }
}

TEST(EncloseOrbit, ContainsHighPrecisionIterates) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> cc(-48, 16), ci(-32, 32), zz(-24, 24), kk(0, 10), rr(8, 20);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    mpq_class cx(cc(rng), 32), cy(ci(rng), 32), zx(zz(rng), 16), zy(zz(rng), 16);
    int k = kk(rng);
    long r = rr(rng);
    PolyEnclosure p = PolyEnclosure::quadratic(*exact_dyadic(cx), *exact_dyadic(cy));
    Box z = Box::around(*exact_dyadic(zx), *exact_dyadic(zy), Dyadic::pow2(-r));
    Box out;
    try {
      out = enclose_orbit(p, z, k, 20);
    } catch (const WidthBlowup&) {
      continue;
    }
    // Oracle: pointwise MPFR iteration of the box center and two corners.
    mpq_class h = Dyadic::pow2(-r).to_mpq();
    for (auto [dx, dy] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{-1, 1}}) {
      auto w = testutil::quad_iterate(zx + dx * h, zy + dy * h, cx, cy, k);
      if (std::abs(w) > 1e6) continue;
      double slack = 1e-12 * (1 + std::abs(w));
      EXPECT_TRUE(out.re_lo.to_double() - slack <= w.real() && w.real() <= out.re_hi.to_double() + slack &&
                  out.im_lo.to_double() - slack <= w.imag() && w.imag() <= out.im_hi.to_double() + slack)
          << "trial " << t;
    }
    ++checked;
  }
  EXPECT_GT(checked, 500);
}

TEST(EncloseOrbit, InclusionIsotone) {
  PolyEnclosure p = quad(-3, 2, 1, 4);
  Box big = Box::around(Dyadic::from_parts(1, 2), Dyadic::from_parts(1, 3), Dyadic::pow2(-6));
  Box small = Box::around(Dyadic::from_parts(1, 2), Dyadic::from_parts(1, 3), Dyadic::pow2(-9));
  for (int k = 1; k <= 6; ++k) {
    Box a = enclose_orbit(p, big, k, 12), b = enclose_orbit(p, small, k, 12);
    EXPECT_TRUE(a.meets(b));
    EXPECT_LE(b.width(), a.width());
  }
}

TEST(OrbitApprox, Examples) {
  auto zero = ComplexOracle::exact(0, 0);
  auto [x0, y0] = orbit_approx(quad(0, 0), zero, 5, 10);
  EXPECT_LT(x0.abs(), Dyadic::pow2(-10));
  EXPECT_LT(y0.abs(), Dyadic::pow2(-10));
  auto [x1, y1] = orbit_approx(quad(-1, 0), zero, 7, 10);
  EXPECT_LT((x1 + Dyadic(1)).abs(), Dyadic::pow2(-10));
  EXPECT_LT(y1.abs(), Dyadic::pow2(-10));
}

TEST(OrbitApprox, SlowParabolicConvergence) {
  // Reference: 640-bit MPFR iteration of 0 under z^2 + 1/4, 100 steps,
  // frozen as 0.49060422012938535 (also reproduced by an independent
  // 200-digit computation).
  auto ref = testutil::quad_iterate(0, 0, mpq_class(1, 4), 0, 100);
  ASSERT_NEAR(ref.real(), 0.49060422012938535, 1e-15);
  auto [x, y] = orbit_approx(quad(1, 2), ComplexOracle::exact(0, 0), 100, 6);
  EXPECT_LT(std::abs(x.to_double() - 0.49060422012938535), std::ldexp(1.0, -6));
  EXPECT_LT(std::abs(y.to_double()), std::ldexp(1.0, -6));
  auto [xf, yf] = orbit_approx(quad(1, 2), ComplexOracle::exact(0, 0), 100, 40);
  EXPECT_LT(std::abs(xf.to_double() - 0.49060422012938535), std::ldexp(1.0, -40));
}

TEST(OrbitApprox, InexactOracleInput) {
  // z = 1/3 + i/7 through rounding oracles; c = -3/4.
  ComplexOracle z{RealOracle::rational(mpq_class(1, 3)), RealOracle::rational(mpq_class(1, 7))};
  auto ref = testutil::quad_iterate(mpq_class(1, 3), mpq_class(1, 7), mpq_class(-3, 4), 0, 12);
  auto [x, y] = orbit_approx(quad(-3, 2), z, 12, 30);
  EXPECT_LT(std::abs(x.to_double() - ref.real()), std::ldexp(1.0, -30));
  EXPECT_LT(std::abs(y.to_double() - ref.imag()), std::ldexp(1.0, -30));
}

TEST(OrbitApprox, ConsistentAcrossPrecisions) {
  ComplexOracle z{RealOracle::rational(mpq_class(2, 5)), RealOracle::rational(mpq_class(-1, 3))};
  PolyEnclosure p = quad(-1, 1, 1, 3);
  for (std::uint64_t m : {4u, 10u, 20u}) {
    for (int k : {3, 9}) {
      auto [a, b] = orbit_approx(p, z, k, m);
      auto [c, d] = orbit_approx(p, z, k, m + 5);
      double dist = std::hypot((a - c).to_double(), (b - d).to_double());
      EXPECT_LT(dist, std::ldexp(1.0, -static_cast<int>(m)) + std::ldexp(1.0, -static_cast<int>(m) - 5));
    }
  }
}

TEST(PolyInput, Formats) {
  ConversionLog log;
  PolyEnclosure q = parse_poly_text("# basilica\nQUAD c=-1 0\n", 20, &log);
  EXPECT_TRUE(q.is_unicritical_quadratic());
  EXPECT_TRUE(log.notes.empty());
  PolyEnclosure c = parse_poly_text("POLY d=3\n0 1/2^1\n-1 0\n0 0\n2 0\n", 20, &log);
  EXPECT_EQ(c.degree(), 3);
  PolyEnclosure r = parse_poly_text("QUAD c=0.1 0", 20, &log);
  EXPECT_EQ(log.notes.size(), 1u);
  EXPECT_LE(std::abs(r.coeff(0).re.query(30).to_double() - 0.1), std::ldexp(1.0, -20));
  EXPECT_THROW(parse_poly_text("POLY d=3\n0 0\n", 20), InputError);
  EXPECT_THROW(parse_poly_text("CUBIC", 20), InputError);
  EXPECT_THROW(parse_poly_text("POLY d=2\n1 0\n0 0\n0 0\n", 20), DomainError);
  EXPECT_THROW(parse_poly_text("QUAD c=oracle:nope", 20), InputError);
}
