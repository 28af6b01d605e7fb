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

// Points, closed balls and finite ball unions with dyadic data, their text
// serialization, and the Hausdorff distance between ball unions.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "juliacert/dyadic.hpp"
#include "juliacert/error.hpp"

namespace juliacert {

using DyadicPoint = std::vector<Dyadic>;

inline DyadicPoint point2(Dyadic x, Dyadic y) { return {std::move(x), std::move(y)}; }

inline Dyadic dist2(const DyadicPoint& a, const DyadicPoint& b) {
  Dyadic s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Dyadic d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Closed ball.
struct Ball {
  DyadicPoint center;
  Dyadic radius;

  std::size_t dim() const { return center.size(); }
  bool contains(const DyadicPoint& p) const { return dist2(p, center) <= radius * radius; }
  // Exact containment test: this ball is a subset of `o`.
  bool inside(const Ball& o) const {
    if (radius > o.radius) return false;
    Dyadic slack = o.radius - radius;
    return dist2(center, o.center) <= slack * slack;
  }
  bool meets(const Ball& o) const {
    Dyadic r = radius + o.radius;
    return dist2(center, o.center) <= r * r;
  }
  friend bool operator==(const Ball&, const Ball&) = default;
};

// Finite union of closed balls of a common dimension.
struct Cover {
  std::size_t dim = 2;
  std::vector<Ball> balls;

  bool empty() const { return balls.empty(); }
  std::size_t size() const { return balls.size(); }
  void add(Ball b) {
    if (b.dim() != dim) throw DomainError("ball dimension does not match cover");
    balls.push_back(std::move(b));
  }
  bool contains(const DyadicPoint& p) const {
    for (const auto& b : balls)
      if (b.contains(p)) return true;
    return false;
  }
  friend bool operator==(const Cover&, const Cover&) = default;
};

// Text format: a header line "COVER dim=<k> count=<N>" followed by one line
// per ball with k coordinates and the radius, each written as p/2^m.
inline void write_cover(std::ostream& os, const Cover& c) {
  os << "COVER dim=" << c.dim << " count=" << c.balls.size() << '\n';
  for (const auto& b : c.balls) {
    for (const auto& x : b.center) os << x.str() << ' ';
    os << b.radius.str() << '\n';
  }
}

inline std::string cover_to_string(const Cover& c) {
  std::ostringstream os;
  write_cover(os, c);
  return os.str();
}

inline Cover read_cover(std::istream& is) {
  std::string line;
  while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
  }
  std::size_t dim = 0, count = 0;
  {
    std::istringstream hs(line);
    std::string tag, d, n;
    hs >> tag >> d >> n;
    if (tag != "COVER" || d.rfind("dim=", 0) != 0 || n.rfind("count=", 0) != 0)
      throw InputError("cover: bad header '" + line + "'");
    try {
      dim = std::stoul(d.substr(4));
      count = std::stoul(n.substr(6));
    } catch (...) {
      throw InputError("cover: bad header '" + line + "'");
    }
    if (dim == 0 || dim > 16) throw InputError("cover: unsupported dimension");
  }
  Cover c;
  c.dim = dim;
  c.balls.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw InputError("cover: truncated ball list");
    std::istringstream ls(line);
    Ball b;
    std::string tok;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(ls >> tok)) throw InputError("cover: short ball line");
      b.center.push_back(Dyadic::parse(tok));
    }
    if (!(ls >> tok)) throw InputError("cover: missing radius");
    b.radius = Dyadic::parse(tok);
    if (b.radius.sign() < 0) throw InputError("cover: negative radius");
    if (ls >> tok) throw InputError("cover: trailing data on ball line");
    c.balls.push_back(std::move(b));
  }
  return c;
}

inline Cover cover_from_string(const std::string& s) {
  std::istringstream is(s);
  return read_cover(is);
}

namespace detail {

// Double image of a ball with a bound on the conversion error.
struct DBall {
  std::vector<double> c;
  double r = 0;
  double err = 0;  // |true center - c| + |true radius - r| upper bound
};

inline double conv(const Dyadic& x, double& err) {
  double d = x.to_double();
  if (!x.exact_double()) err += std::abs(d) * 0x1p-51 + 0x1p-1000;
  return d;
}

inline DBall to_dball(const Ball& b) {
  DBall d;
  for (const auto& x : b.center) d.c.push_back(conv(x, d.err));
  d.r = conv(b.radius, d.err);
  return d;
}

// |x - c| computed in double with an absolute error bound.
inline double dist_approx(const std::vector<double>& x, const DBall& b, double& err) {
  double s = 0, mag = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - b.c[i];
    s += d * d;
    mag += std::abs(x[i]) + std::abs(b.c[i]);
  }
  double v = std::sqrt(s);
  err = (v + mag) * 0x1p-46 + b.err + 0x1p-1000;
  return v;
}

// Bounds on dist(x, union B) for a point x.
inline void point_to_union(const std::vector<double>& x, const std::vector<DBall>& bs,
                           double& lo, double& hi) {
  lo = hi = std::numeric_limits<double>::infinity();
  for (const auto& b : bs) {
    double e = 0;
    double d = dist_approx(x, b, e) - b.r;
    lo = std::min(lo, d - e);
    hi = std::min(hi, d + e);
  }
  lo = std::max(lo, 0.0);
  hi = std::max(hi, 0.0);
}

struct Cell {
  double upper;
  std::size_t ball;
  std::vector<double> q;
  double w;  // half-width
  bool operator<(const Cell& o) const { return upper < o.upper; }
};

// Bounds [lo, hi] on the directed distance sup_{x in A} dist(x, B), with
// hi - lo <= tol.
inline std::pair<double, double> directed(const Cover& A, const Cover& B, double tol) {
  std::vector<DBall> bs;
  bs.reserve(B.balls.size());
  for (const auto& b : B.balls) bs.push_back(to_dball(b));
  const std::size_t k = A.dim;
  const double sqk = std::sqrt(static_cast<double>(k)) * (1 + 0x1p-40);
  double L = 0;
  std::priority_queue<Cell> pq;
  std::vector<DBall> as;
  for (std::size_t i = 0; i < A.balls.size(); ++i) {
    const Ball& a = A.balls[i];
    as.push_back(to_dball(a));
    bool covered = false;
    for (const auto& b : B.balls)
      if (a.inside(b)) {
        covered = true;
        break;
      }
    if (covered) {
      as.back().r = -1;  // marks "no contribution"
      continue;
    }
    const DBall& da = as.back();
    double lo, hi;
    point_to_union(da.c, bs, lo, hi);
    L = std::max(L, lo);
    double w = da.r + da.err;
    pq.push({hi + w * sqk, i, da.c, w});
  }
  double U = L;
  while (!pq.empty()) {
    Cell cell = pq.top();
    if (cell.upper <= L + tol) return {L, std::max(U, cell.upper)};
    pq.pop();
    const DBall& da = as[cell.ball];
    double s = cell.w * sqk;
    // Lower bound from a point of the ball near the cell.
    {
      double e = 0;
      double dq = dist_approx(cell.q, da, e);
      std::vector<double> x = cell.q;
      if (dq + e > da.r - da.err) {
        double t = dq > 0 ? (da.r - da.err) / dq * (1 - 0x1p-30) : 0;
        if (t < 0) t = 0;
        for (std::size_t j = 0; j < k; ++j) x[j] = da.c[j] + (cell.q[j] - da.c[j]) * t;
        double e2 = 0;
        double dx = dist_approx(x, da, e2);
        if (dx + e2 > da.r - da.err) x = da.c;
      }
      double lo, hi;
      point_to_union(x, bs, lo, hi);
      L = std::max(L, lo);
    }
    if (s <= tol / 8) {
      // Too small to split further; its bound stands.
      double lo, hi;
      point_to_union(cell.q, bs, lo, hi);
      U = std::max(U, hi + s);
      continue;
    }
    double hw = cell.w / 2;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      std::vector<double> q = cell.q;
      for (std::size_t j = 0; j < k; ++j) q[j] += (mask >> j & 1) ? hw : -hw;
      double e = 0;
      double dq = dist_approx(q, da, e);
      if (dq - e > da.r + da.err + hw * sqk) continue;  // cell misses the ball
      double lo, hi;
      point_to_union(q, bs, lo, hi);
      pq.push({hi + hw * sqk, cell.ball, std::move(q), hw});
    }
  }
  return {L, std::max(U, L)};
}

inline bool all_inside(const Cover& A, const Cover& B) {
  for (const auto& a : A.balls) {
    bool ok = false;
    for (const auto& b : B.balls)
      if (a.inside(b)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

// Hausdorff distance of two nonempty ball unions, within 2^-n.
inline Dyadic hausdorff_distance(const Cover& A, const Cover& B, std::uint64_t n) {
  if (A.empty() || B.empty()) throw DomainError("Hausdorff distance of an empty cover");
  if (A.dim != B.dim) throw DomainError("Hausdorff distance across dimensions");
  if (detail::all_inside(A, B) && detail::all_inside(B, A)) return Dyadic();
  if (A.size() == 1 && B.size() == 1) {
    // Two balls: |a - b| + |r - s|.
    const Ball& a = A.balls[0];
    const Ball& b = B.balls[0];
    auto [lo, hi] = sqrt_bounds(dist2(a.center, b.center), n + 4);
    Dyadic mid = (lo + hi).mul_pow2(-1);
    return mid + (a.radius - b.radius).abs();
  }
  if (n > 40) throw DomainError("Hausdorff distance of general covers supports n <= 40");
  double tol = std::ldexp(1.0, -static_cast<int>(n) - 1);
  auto [l1, u1] = detail::directed(A, B, tol);
  auto [l2, u2] = detail::directed(B, A, tol);
  double lo = std::max(l1, l2), hi = std::max(u1, u2);
  Dyadic mid = (Dyadic::from_double(lo) + Dyadic::from_double(hi)).mul_pow2(-1);
  return mid.floor_to(n + 3);
}

}  // namespace juliacert
