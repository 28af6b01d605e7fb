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

#include <complex>
#include <fstream>
#include <sstream>

#include "juliacert/certificate.hpp"
#include "juliacert/periodic.hpp"
#include "test_util.hpp"

using namespace juliacert;

namespace {

const Dyadic kEps = Dyadic::pow2(-10);

PolyEnclosure quad(Dyadic re, Dyadic im = Dyadic()) { return PolyEnclosure::quadratic(re, im); }

std::complex<double> center(const PeriodicPointRecord& r) {
  return {r.location.center_re().to_double(), r.location.center_im().to_double()};
}

Box around(double x, double y, double w) {
  return Box::around(Dyadic::from_double(x), Dyadic::from_double(y), Dyadic::from_double(w / 2));
}

std::vector<std::complex<double>> drain(RepellingStream s, int max_period, std::vector<int>* periods = nullptr) {
  std::vector<std::complex<double>> out;
  for (;;) {
    auto it = s.next();
    if (std::holds_alternative<PeriodCapMarker>(it)) break;
    auto e = std::get<RepellingEmission>(it);
    if (e.period > max_period) break;
    out.emplace_back(e.point[0].to_double(), e.point[1].to_double());
    if (periods) periods->push_back(e.period);
  }
  return out;
}

OrbitCertificate cycle_cert(int period, OrbitKind kind, std::vector<Ball> balls) {
  CertOrbit o;
  o.period = period;
  o.kind = kind;
  o.balls = std::move(balls);
  return {{o}};
}

Ball ball(Dyadic x, Dyadic y, Dyadic r) { return {point2(std::move(x), std::move(y)), std::move(r)}; }

}  // namespace

TEST(ClassifyMultiplier, Examples) {
  EXPECT_EQ(classify_multiplier(around(4, 0, 0x1p-10)), MultiplierClass::Repelling);
  EXPECT_EQ(classify_multiplier(around(0, 0, 0x1p-10)), MultiplierClass::Attracting);
  EXPECT_EQ(classify_multiplier(around(1, 0, 0x1p-10)), MultiplierClass::Indifferent);
  EXPECT_EQ(classify_multiplier(around(1, 0, 0.5)), MultiplierClass::Unknown);
  EXPECT_EQ(classify_multiplier(around(0, 1, 0x1p-6)), MultiplierClass::Indifferent);
}

TEST(IsolatePeriodic, SquareFixedPoints) {
  auto recs = isolate_periodic(quad(0), 1, kEps);
  ASSERT_EQ(recs.size(), 2u);
  int attracting = 0, repelling = 0;
  for (const auto& r : recs) {
    EXPECT_TRUE(r.certified);
    EXPECT_LE(r.location.width(), kEps);
    if (r.location.contains(Dyadic(), Dyadic())) {
      EXPECT_EQ(r.cls, MultiplierClass::Attracting);
      EXPECT_TRUE(r.multiplier.contains(Dyadic(), Dyadic()));
      ++attracting;
    } else {
      EXPECT_TRUE(r.location.contains(Dyadic(1), Dyadic()));
      EXPECT_EQ(r.cls, MultiplierClass::Repelling);
      EXPECT_TRUE(r.multiplier.contains(Dyadic(2), Dyadic()));
      ++repelling;
    }
  }
  EXPECT_EQ(attracting, 1);
  EXPECT_EQ(repelling, 1);
}

TEST(IsolatePeriodic, SquarePeriodTwo) {
  // Roots of z^4 = z: 0 and the cube roots of unity; (p^2)'(z) = 4 z^3.
  auto recs = isolate_periodic(quad(0), 2, kEps);
  ASSERT_EQ(recs.size(), 4u);
  std::vector<std::complex<double>> expected = {0, 1, std::polar(1.0, 2 * M_PI / 3), std::polar(1.0, -2 * M_PI / 3)};
  for (auto w : expected) {
    int hits = 0;
    for (const auto& r : recs) {
      if (std::abs(center(r) - w) < 0x1p-10) {
        ++hits;
        double lam = w == 0.0 ? 0 : 4;
        EXPECT_LE(std::abs(r.multiplier.center_re().to_double() - lam), 0x1p-8);
        EXPECT_TRUE(r.multiplier.contains(Dyadic::from_double(lam), Dyadic()) ||
                    std::abs(r.multiplier.center_im().to_double()) < 0x1p-8);
        EXPECT_EQ(r.exact_period, w == 0.0 || w == 1.0 ? 1 : 2);
      }
    }
    EXPECT_EQ(hits, 1) << w;
  }
}

TEST(IsolatePeriodic, ParabolicDoubleRoot) {
  PeriodicCatalog cat(quad(Dyadic::from_parts(1, 2)));
  auto recs = isolate_periodic(cat, 1, kEps);
  bool unresolved = false;
  for (const auto& r : recs)
    if (!r.certified && r.cls == MultiplierClass::Unknown &&
        r.location.contains(Dyadic::from_parts(1, 1), Dyadic()))
      unresolved = true;
  EXPECT_TRUE(unresolved);
  EXPECT_THROW(isolate_periodic_strict(cat, 1, kEps), MultipleRootUnresolved);
}

TEST(IsolatePeriodic, PeriodCap) {
  PeriodicCatalog cat(quad(0));
  EXPECT_EQ(cat.max_period(), 8);
  EXPECT_THROW(isolate_periodic(cat, 9, kEps), PeriodCapExceeded);
  IsolationOptions small;
  small.max_roots = 16;
  EXPECT_EQ(PeriodicCatalog(quad(0), small).max_period(), 4);
}

TEST(IsolatePeriodic, CensusAndDisjointness) {
  PeriodicCatalog cat(quad(0));
  for (int m = 1; m <= 4; ++m) {
    auto recs = isolate_periodic_strict(cat, m, kEps);
    EXPECT_EQ(recs.size(), static_cast<std::size_t>(1) << m);
    int rep = 0;
    for (const auto& r : recs) rep += r.cls == MultiplierClass::Repelling;
    EXPECT_EQ(rep, (1 << m) - 1);
    for (std::size_t i = 0; i < recs.size(); ++i)
      for (std::size_t j = i + 1; j < recs.size(); ++j) EXPECT_FALSE(recs[i].location.meets(recs[j].location));
  }
}

TEST(IsolatePeriodic, RepellingRecordsReturn) {
  // Oracle: 640-bit iteration of the record center m times.
  for (Dyadic c : {Dyadic(-1), Dyadic::from_parts(-3, 2), Dyadic(-2)}) {
    PeriodicCatalog cat(quad(c, Dyadic::from_parts(1, 4)));
    for (int m = 1; m <= 4; ++m) {
      for (const auto& r : isolate_periodic(cat, m, kEps)) {
        if (r.cls != MultiplierClass::Repelling) continue;
        auto z = center(r);
        auto w = testutil::quad_iterate(r.location.center_re().to_mpq(), r.location.center_im().to_mpq(),
                                        c.to_mpq(), mpq_class(1, 16), m);
        // The center is within eps of the root; p^m expands that by the multiplier.
        double lam = std::hypot(r.multiplier.center_re().to_double(), r.multiplier.center_im().to_double());
        EXPECT_LT(std::abs(w - z), 0x1p-10 * (1 + lam) + 0x1p-20) << "c=" << c.str() << " m=" << m;
      }
    }
  }
}

TEST(EnumerateRepelling, SquareExamples) {
  std::vector<int> periods;
  auto pts = drain(enumerate_repelling(quad(0), kEps), 4, &periods);
  ASSERT_FALSE(pts.empty());
  EXPECT_LT(std::abs(pts[0] - 1.0), 0x1p-10);
  for (auto z : pts) EXPECT_LT(std::abs(std::abs(z) - 1), 0x1p-9);
  for (int m = 1; m <= 4; ++m) EXPECT_EQ(std::count(periods.begin(), periods.end(), m), (1 << m) - 1);
  auto distinct = [&](int lo, int hi) {
    std::vector<std::complex<double>> d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (periods[i] < lo || periods[i] > hi) continue;
      if (std::none_of(d.begin(), d.end(), [&](auto w) { return std::abs(w - pts[i]) < 0x1p-8; }))
        d.push_back(pts[i]);
    }
    return d.size();
  };
  EXPECT_EQ(distinct(4, 4), 15u);
  // Over m <= 4: roots of unity of order 1, 3, 5, 7 or 15, i.e. 1 + 2 + 4 + 6 + 8.
  EXPECT_EQ(distinct(1, 4), 21u);
}

TEST(EnumerateRepelling, ChebyshevSegment) {
  // J(z^2 - 2) = [-2, 2].
  auto pts = drain(enumerate_repelling(quad(-2), kEps), 6);
  EXPECT_GT(pts.size(), 40u);
  for (auto z : pts) {
    EXPECT_LE(std::abs(z.imag()), 0x1p-10);
    EXPECT_LE(std::abs(z.real()), 2 + 0x1p-10);
  }
}

TEST(EnumerateRepelling, EndsWithCapMarker) {
  IsolationOptions opt;
  opt.max_roots = 4;
  RepellingStream s = enumerate_repelling(quad(0), kEps, opt);
  int emitted = 0;
  for (;;) {
    auto it = s.next();
    if (auto* m = std::get_if<PeriodCapMarker>(&it)) {
      EXPECT_EQ(m->last_period, 2);
      break;
    }
    ++emitted;
  }
  EXPECT_EQ(emitted, 1 + 3);
}

TEST(RefineCertificateOrbit, Examples) {
  auto c1 = cycle_cert(2, OrbitKind::Attracting,
                       {ball(0, 0, Dyadic::pow2(-2)), ball(-1, 0, Dyadic::pow2(-2))});
  auto pts = refine_certificate_orbit(quad(-1), c1, 0, 20);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT(pts[0][0].abs(), Dyadic::pow2(-20));
  EXPECT_LT((pts[1][0] + Dyadic(1)).abs(), Dyadic::pow2(-20));
  EXPECT_LT(pts[1][1].abs(), Dyadic::pow2(-20));

  auto c2 = cycle_cert(1, OrbitKind::Attracting, {ball(0, 0, Dyadic::pow2(-1))});
  auto z = refine_certificate_orbit(quad(0), c2, 0, 20);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_LT(z[0][0].abs(), Dyadic::pow2(-20));

  // Parabolic double root at 1/2: Newton from the certified start.
  auto c3 = cycle_cert(1, OrbitKind::Parabolic, {ball(Dyadic::from_parts(1, 1), 0, Dyadic::pow2(-2))});
  auto w = refine_certificate_orbit(quad(Dyadic::from_parts(1, 2)), c3, 0, 12);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_LT((w[0][0] - Dyadic::from_parts(1, 1)).abs(), Dyadic::pow2(-12));
  EXPECT_LT(w[0][1].abs(), Dyadic::pow2(-12));
}

TEST(RefineCertificateOrbit, RejectsNonIsolatingBalls) {
  // The ball holds both fixed points of z^2.
  auto bad = cycle_cert(1, OrbitKind::Attracting, {ball(Dyadic::from_parts(1, 1), 0, Dyadic(1))});
  EXPECT_THROW(refine_certificate_orbit(quad(0), bad, 0, 20), CertificateInvalid);
  auto empty = cycle_cert(1, OrbitKind::Attracting, {ball(5, 5, Dyadic::pow2(-3))});
  EXPECT_THROW(refine_certificate_orbit(quad(0), empty, 0, 20), CertificateInvalid);
}

TEST(Certificate, JsonRoundTripAndValidation) {
  auto c = cycle_cert(2, OrbitKind::Attracting, {ball(0, 0, Dyadic::pow2(-2)), ball(-1, 0, Dyadic::pow2(-2))});
  c.orbits[0].domains = c.orbits[0].balls;
  std::string text = certificate_to_json(c);
  EXPECT_EQ(certificate_from_json(text), c);
  EXPECT_EQ(validate_certificate(quad(-1), c), "");
  // Same balls claimed for z^2: no period-2 point in B(-1, 1/4).
  EXPECT_NE(validate_certificate(quad(0), c), "");
  EXPECT_THROW(certificate_from_json("{\"periods\": [1]}"), InputError);
  EXPECT_THROW(certificate_from_json("not json"), InputError);
}

TEST(Certificate, SampleFilesValidate) {
  std::ifstream f(SAMPLES_DIR "/parabolic_quarter.json");
  ASSERT_TRUE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  OrbitCertificate c = certificate_from_json(ss.str());
  ASSERT_EQ(c.orbits.size(), 1u);
  EXPECT_EQ(c.orbits[0].kind, OrbitKind::Parabolic);
  EXPECT_EQ(validate_certificate(quad(Dyadic::from_parts(1, 2)), c), "");
}
