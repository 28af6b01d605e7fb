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

// Orbit certificates: the non-repelling cycles of a polynomial, isolating
// balls for their points, and domains known to lie in the filled Julia set.
//
// JSON layout (parallel arrays, one entry per cycle):
//   {
//     "periods":  [k, ...],
//     "kind":     ["attracting" | "parabolic" | "siegel", ...],
//     "balls":    [[ball, ...], ...],            k isolating balls per cycle
//     "domains":  [[ball | sector, ...], ...],
//     "siegel_companion": [null | "use-beta-fixed-point" | ball, ...]
//   }
//   ball   = {"center": ["p/2^m", "p/2^m"], "radius": "p/2^m"}
//   sector = {"vertex": [..], "dir1": [..], "dir2": [..], "radius": ".."}
// A sector is the set of v + w with |w| <= radius whose direction lies in
// the counterclockwise angle from dir1 to dir2 (opening below pi).

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "juliacert/geometry.hpp"
#include "juliacert/periodic.hpp"
#include "juliacert/roots.hpp"

namespace juliacert {

enum class OrbitKind { Attracting, Parabolic, Siegel };

struct Sector {
  DyadicPoint vertex;
  DyadicPoint dir1, dir2;
  Dyadic radius;
  friend bool operator==(const Sector&, const Sector&) = default;
};

struct CertOrbit {
  int period = 1;
  OrbitKind kind = OrbitKind::Attracting;
  std::vector<Ball> balls;
  std::vector<Ball> domains;
  std::vector<Sector> sectors;
  bool companion_is_beta = false;
  std::optional<Ball> companion;
  friend bool operator==(const CertOrbit&, const CertOrbit&) = default;
};

struct OrbitCertificate {
  std::vector<CertOrbit> orbits;
  friend bool operator==(const OrbitCertificate&, const OrbitCertificate&) = default;
};

inline const char* to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::Attracting: return "attracting";
    case OrbitKind::Parabolic: return "parabolic";
    case OrbitKind::Siegel: return "siegel";
  }
  return "attracting";
}

namespace cert_json {

using nlohmann::json;

inline json point(const DyadicPoint& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(x.str());
  return a;
}
inline json ball(const Ball& b) { return {{"center", point(b.center)}, {"radius", b.radius.str()}}; }
inline json sector(const Sector& s) {
  return {{"vertex", point(s.vertex)},
          {"dir1", point(s.dir1)},
          {"dir2", point(s.dir2)},
          {"radius", s.radius.str()}};
}

inline Dyadic num(const json& j) {
  if (!j.is_string()) throw InputError("certificate: numbers must be strings of the form p/2^m");
  return Dyadic::parse(j.get<std::string>());
}
inline DyadicPoint parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("certificate: points need two coordinates");
  return point2(num(j[0]), num(j[1]));
}
inline Ball parse_ball(const json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("radius"))
    throw InputError("certificate: ball needs center and radius");
  Ball b{parse_point(j["center"]), num(j["radius"])};
  if (b.radius.sign() < 0) throw InputError("certificate: negative radius");
  return b;
}
inline Sector parse_sector(const json& j) {
  for (const char* k : {"vertex", "dir1", "dir2", "radius"})
    if (!j.contains(k)) throw InputError(std::string("certificate: sector missing ") + k);
  return {parse_point(j["vertex"]), parse_point(j["dir1"]), parse_point(j["dir2"]),
          num(j["radius"])};
}

}  // namespace cert_json

inline std::string certificate_to_json(const OrbitCertificate& c) {
  using nlohmann::json;
  json periods = json::array(), kinds = json::array(), balls = json::array(),
       domains = json::array(), comp = json::array();
  for (const auto& o : c.orbits) {
    periods.push_back(o.period);
    kinds.push_back(to_string(o.kind));
    json bs = json::array();
    for (const auto& b : o.balls) bs.push_back(cert_json::ball(b));
    balls.push_back(bs);
    json ds = json::array();
    for (const auto& d : o.domains) ds.push_back(cert_json::ball(d));
    for (const auto& s : o.sectors) ds.push_back(cert_json::sector(s));
    domains.push_back(ds);
    if (o.companion_is_beta) {
      comp.push_back("use-beta-fixed-point");
    } else if (o.companion) {
      comp.push_back(cert_json::ball(*o.companion));
    } else {
      comp.push_back(nullptr);
    }
  }
  json j = {{"periods", periods},
            {"kind", kinds},
            {"balls", balls},
            {"domains", domains},
            {"siegel_companion", comp}};
  return j.dump(2) + "\n";
}

inline OrbitCertificate certificate_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("certificate: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("certificate: top level must be an object");
  for (const char* k : {"periods", "kind", "balls", "domains"})
    if (!j.contains(k) || !j[k].is_array())
      throw InputError(std::string("certificate: missing array '") + k + "'");
  const std::size_t n = j["periods"].size();
  if (j["kind"].size() != n || j["balls"].size() != n || j["domains"].size() != n ||
      (j.contains("siegel_companion") && j["siegel_companion"].size() != n))
    throw InputError("certificate: arrays must have one entry per cycle");
  OrbitCertificate c;
  for (std::size_t i = 0; i < n; ++i) {
    CertOrbit o;
    if (!j["periods"][i].is_number_integer() || j["periods"][i].get<int>() < 1)
      throw InputError("certificate: periods must be positive integers");
    o.period = j["periods"][i].get<int>();
    std::string kind = j["kind"][i].is_string() ? j["kind"][i].get<std::string>() : "";
    if (kind == "attracting") {
      o.kind = OrbitKind::Attracting;
    } else if (kind == "parabolic") {
      o.kind = OrbitKind::Parabolic;
    } else if (kind == "siegel") {
      o.kind = OrbitKind::Siegel;
    } else {
      throw InputError("certificate: unknown kind '" + kind + "'");
    }
    for (const auto& b : j["balls"][i]) o.balls.push_back(cert_json::parse_ball(b));
    if (static_cast<int>(o.balls.size()) != o.period)
      throw InputError("certificate: a cycle of period k needs k isolating balls");
    for (const auto& d : j["domains"][i]) {
      if (d.contains("vertex")) {
        o.sectors.push_back(cert_json::parse_sector(d));
      } else {
        o.domains.push_back(cert_json::parse_ball(d));
      }
    }
    if (j.contains("siegel_companion")) {
      const auto& s = j["siegel_companion"][i];
      if (s.is_string()) {
        if (s.get<std::string>() != "use-beta-fixed-point")
          throw InputError("certificate: unknown companion '" + s.get<std::string>() + "'");
        o.companion_is_beta = true;
      } else if (s.is_object()) {
        o.companion = cert_json::parse_ball(s);
      } else if (!s.is_null()) {
        throw InputError("certificate: bad siegel_companion entry");
      }
    }
    if (o.kind == OrbitKind::Attracting && o.domains.empty())
      throw InputError("certificate: attracting cycle without domains");
    if (o.kind == OrbitKind::Parabolic && o.sectors.empty())
      throw InputError("certificate: parabolic cycle without sectors");
    if (o.kind == OrbitKind::Siegel && !o.companion_is_beta && !o.companion)
      throw InputError("certificate: Siegel cycle without companion point");
    for (const auto& s : o.sectors) {
      Dyadic cr = s.dir1[0] * s.dir2[1] - s.dir1[1] * s.dir2[0];
      if (cr.sign() <= 0 || s.radius.sign() <= 0)
        throw InputError("certificate: sector opening must be in (0, pi) with positive radius");
    }
    c.orbits.push_back(std::move(o));
  }
  return c;
}

namespace detail {

// Double square containing the closed ball (conservative).
inline Square bounding_square(const Ball& b) {
  double x = b.center[0].to_double(), y = b.center[1].to_double();
  double slack = (std::abs(x) + std::abs(y)) * 0x1p-50 + 0x1p-1000;
  double r = fp::up(b.radius.to_double() * (1 + 0x1p-50) + slack);
  double hw = 0x1p-60;
  while (hw < r) hw *= 2;
  return {x, y, hw};
}

// Conservative double disc inside the exact closed ball.
inline FBall inner_disc(const Ball& b) {
  double x = b.center[0].to_double(), y = b.center[1].to_double();
  double err = (std::abs(x) + std::abs(y)) * 0x1p-50 + 0x1p-1000;
  double r = fp::down(b.radius.to_double() * (1 - 0x1p-50) - err);
  return {x, y, std::max(0.0, r)};
}

// Solves (p^k)'(z) = 1 in a disc: the double root of p^k(z) - z at a
// parabolic point with multiplier 1.
inline std::optional<FBall> parabolic_point(const Evaluator<FBall>& ev, int k, FBall U,
                                            double target) {
  auto h = [&](const FBall& z, FBall& hv, FBall& hp) {
    FBall w = z, d1 = FBall::point(1, 0), d2 = FBall::point(0, 0);
    for (int j = 0; j < k; ++j) {
      FBall p1 = ev.deriv(w), p2 = ev.second_deriv(w);
      d2 = p2 * sqr(d1) + p1 * d2;
      d1 = p1 * d1;
      w = ev.eval(w);
    }
    hv = d1 - FBall::point(1, 0);
    hp = d2;
  };
  bool certified = false;
  for (int it = 0; it < 80; ++it) {
    FBall mid = FBall::point(U.re, U.im);
    FBall hm, hpm, hu, hpu;
    h(mid, hm, hpm);
    h(U, hu, hpu);
    std::complex<double> d = hpm.mid();
    if (d == 0.0) return std::nullopt;
    FBall Y = FBall::point(1.0 / d);
    FBall t = FBall::point(1, 0) - Y * hpu;
    FBall K = mid - Y * hm + FBall{0, 0, fp::up(t.mag_hi() * U.rad)};
    if (!K.finite()) return std::nullopt;
    if (!certified) {
      if (!K.inside_open(U.re, U.im, U.rad)) return std::nullopt;
      certified = true;
    }
    if (!(K.rad < U.rad)) break;
    U = K;
    if (U.rad <= target) break;
  }
  if (!certified) return std::nullopt;
  return U;
}

}  // namespace detail

// Points within 2^-n of the k points of cycle i of the certificate, in ball
// order. Throws CertificateInvalid when some ball does not isolate a unique
// point of period k.
inline std::vector<DyadicPoint> refine_certificate_orbit(const PolyEnclosure& p,
                                                         const OrbitCertificate& cert,
                                                         std::size_t i, std::uint64_t n) {
  if (i >= cert.orbits.size()) throw InputError("certificate has no cycle " + std::to_string(i));
  const CertOrbit& o = cert.orbits[i];
  Evaluator<FBall> ev(p);
  const double R = escape_radius(p).to_double();
  const double target = std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(n, 1000)) - 2);
  std::vector<DyadicPoint> out;
  for (std::size_t j = 0; j < o.balls.size(); ++j) {
    const Ball& D = o.balls[j];
    Square sq = detail::bounding_square(D);
    RootSearch::Options opt;
    opt.period = o.period;
    opt.escape_R = R;
    opt.target = std::max(target, 0x1p-44);
    RootSearch search(ev, sq, opt);
    search.run();
    auto roots = dedupe_roots(search.roots());
    std::vector<CertifiedRoot> inside;
    for (const auto& r : roots) {
      DyadicPoint c = point2(Dyadic::from_double(r.enclosure.re), Dyadic::from_double(r.enclosure.im));
      if (D.contains(c)) inside.push_back(r);
    }
    bool cluster_inside = false;
    for (const auto& s : search.unresolved()) {
      Ball sb{point2(Dyadic::from_double(s.x), Dyadic::from_double(s.y)),
              Dyadic::from_double(s.half_diag())};
      if (sb.meets(D)) cluster_inside = true;
    }
    FBall E;
    bool parabolic = false;
    if (inside.size() == 1 && !cluster_inside) {
      E = inside[0].enclosure;
    } else if (o.kind == OrbitKind::Parabolic && inside.empty() && cluster_inside) {
      auto e = detail::parabolic_point(ev, o.period, detail::inner_disc(D), std::max(target, 0x1p-46));
      if (!e) throw CertificateInvalid("cannot certify the parabolic point in ball " + std::to_string(j));
      E = *e;
      parabolic = true;
    } else {
      throw CertificateInvalid("ball " + std::to_string(j) + " of cycle " + std::to_string(i) +
                               " does not isolate a unique periodic point");
    }
    Box loc = E.to_box();
    if (E.rad > target) {
      if (parabolic)
        throw WidthBlowup("parabolic point refinement limited to double precision");
      Box mult;
      detail::refine_high(p, o.period, E, target, loc, mult);
    }
    Dyadic h = Dyadic::pow2(-static_cast<long>(n) - 3);
    out.push_back(point2((loc.center_re() + h).floor_to(n + 2), (loc.center_im() + h).floor_to(n + 2)));
  }
  return out;
}

// Checks a certificate beyond its syntax: every ball isolates a point of the
// stated period, the cycle maps ball to ball, and multipliers match the kind.
// Returns an empty string when valid, else a description of the problem.
inline std::string validate_certificate(const PolyEnclosure& p, const OrbitCertificate& cert) {
  Evaluator<FBall> ev(p);
  for (std::size_t i = 0; i < cert.orbits.size(); ++i) {
    const CertOrbit& o = cert.orbits[i];
    std::vector<DyadicPoint> pts;
    try {
      pts = refine_certificate_orbit(p, cert, i, 30);
    } catch (const Error& e) {
      return "cycle " + std::to_string(i) + ": " + e.what();
    }
    for (std::size_t j = 0; j < pts.size(); ++j) {
      FBall z = FBall::from_dyadic(pts[j][0], pts[j][1], Dyadic::pow2(-29));
      FBall img = ev.eval(z);
      const Ball& next = o.balls[(j + 1) % pts.size()];
      FBall nd = detail::inner_disc(next);
      if (!img.inside_closed(nd.re, nd.im, nd.rad))
        return "cycle " + std::to_string(i) + ": image of point " + std::to_string(j) +
               " is not in the next ball";
    }
    FBall z = FBall::from_dyadic(pts[0][0], pts[0][1], Dyadic::pow2(-29));
    FBall w = z, dw = FBall::point(1, 0);
    for (int k = 0; k < o.period; ++k) {
      dw = ev.deriv(w) * dw;
      w = ev.eval(w);
    }
    double lo = dw.mag_lo(), hi = dw.mag_hi();
    if (o.kind == OrbitKind::Attracting && !(hi < 1))
      return "cycle " + std::to_string(i) + ": multiplier not certified attracting";
    if (o.kind != OrbitKind::Attracting && !(lo <= 1 && 1 <= hi))
      return "cycle " + std::to_string(i) + ": multiplier does not meet the unit circle";
  }
  return "";
}

}  // namespace juliacert
