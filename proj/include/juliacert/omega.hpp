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

// Spoked circles: the unit circle plus radial segments
// spoke(k) = { r e^{2 pi i / k} : 1 - 1/k <= r <= 1 } for selected k, their
// filled version (the unit disk) and the slice with every spoke present.

#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "juliacert/geometry.hpp"

namespace juliacert {

// t = (0.d_1 d_2 ... d_K)_2, trailing zeros removed.
class BitList {
 public:
  BitList() = default;
  explicit BitList(std::vector<bool> bits) : bits_(std::move(bits)) { trim(); }

  // Accepts "101", "0.101" or "" (t = 0).
  static BitList parse(std::string_view s) {
    if (s.size() >= 2 && s[0] == '0' && s[1] == '.') s.remove_prefix(2);
    std::vector<bool> b;
    for (char ch : s) {
      if (ch != '0' && ch != '1') throw InputError("bit string may only contain 0 and 1");
      b.push_back(ch == '1');
    }
    return BitList(std::move(b));
  }

  std::size_t size() const { return bits_.size(); }
  // d_k, 1-based; zero past the end.
  bool bit(std::size_t k) const { return k >= 1 && k <= bits_.size() && bits_[k - 1]; }
  std::vector<int> spokes() const {
    std::vector<int> ks;
    for (std::size_t k = 1; k <= bits_.size(); ++k)
      if (bits_[k - 1]) ks.push_back(static_cast<int>(k));
    return ks;
  }
  std::string str() const {
    std::string s = "0.";
    for (bool b : bits_) s += b ? '1' : '0';
    if (bits_.empty()) s += '0';
    return s;
  }
  friend bool operator==(const BitList&, const BitList&) = default;

 private:
  void trim() {
    while (!bits_.empty() && !bits_.back()) bits_.pop_back();
  }
  std::vector<bool> bits_;
};

namespace detail {

// Ball centers are rounded to the grid 2^-(n+4); each center then lies within
// 2^-(n+4) of the sampled curve point. Radius 2^-(n+1), sampling step at most
// 2^-(n+1), so the curve is inside the union and the union is within
// 2^-(n+1) + 2^-(n+4) < 2^-n of the curve.
class SpokeCoverBuilder {
 public:
  explicit SpokeCoverBuilder(std::uint64_t n) : n_(n), g_(static_cast<int>(n) + 4) {
    step_ = std::ldexp(1.0, -static_cast<int>(n) - 1);
  }

  void add_circle() {
    const long N = 1L << (n_ + 4);
    for (long j = 0; j < N; ++j) {
      double a = 2 * M_PI * static_cast<double>(j) / static_cast<double>(N);
      add_point(std::cos(a), std::sin(a));
    }
  }

  void add_spoke(long k) {
    double a = 2 * M_PI / static_cast<double>(k);
    double ux = k == 1 ? 1.0 : std::cos(a), uy = k == 1 ? 0.0 : std::sin(a);
    double len = 1.0 / static_cast<double>(k);
    long steps = static_cast<long>(std::ceil(len / step_));
    for (long s = 0; s <= steps; ++s) {
      double r = 1 - len + len * static_cast<double>(s) / static_cast<double>(steps);
      add_point(r * ux, r * uy);
    }
  }

  Cover take() {
    Cover c;
    c.dim = 2;
    Dyadic rad = Dyadic::pow2(-static_cast<long>(n_) - 1);
    for (const auto& [i, j] : order_)
      c.add({point2(Dyadic::from_parts(i, g_), Dyadic::from_parts(j, g_)), rad});
    return c;
  }

 private:
  void add_point(double x, double y) {
    long i = std::lround(std::ldexp(x, g_)), j = std::lround(std::ldexp(y, g_));
    if (seen_.insert({i, j}).second) order_.emplace_back(i, j);
  }

  std::uint64_t n_;
  int g_;
  double step_;
  std::set<std::pair<long, long>> seen_;
  std::vector<std::pair<long, long>> order_;
};

}  // namespace detail

// Circle plus spoke(k) for every k with d_k = 1; d_H <= 2^-n.
inline Cover omega_cover(const BitList& t, std::uint64_t n) {
  if (n > 24) throw DomainError("omega_cover supports n <= 24");
  detail::SpokeCoverBuilder b(n);
  b.add_circle();
  for (int k : t.spokes()) b.add_spoke(k);
  return b.take();
}

// Closed unit disk: the ball B(0, 1 - 2^-(n+1)) plus the circle balls.
inline Cover omega_filled_cover(std::uint64_t n) {
  if (n > 24) throw DomainError("omega_filled_cover supports n <= 24");
  detail::SpokeCoverBuilder b(n);
  b.add_circle();
  Cover ring = b.take();
  Cover c;
  c.dim = 2;
  c.add({point2(0, 0), Dyadic(1) - Dyadic::pow2(-static_cast<long>(n) - 1)});
  for (auto& ball : ring.balls) c.add(std::move(ball));
  return c;
}

// Circle plus spokes k = 1..k_max. Spokes beyond 2^(n+1) are shorter than
// 2^-(n+1) and stay within 2^-n of the circle balls, so k_max >= 2^(n+1)
// gives d_H <= 2^-n to the union over all k.
inline Cover w_slice_cover(std::uint64_t n, long k_max) {
  if (n > 24) throw DomainError("w_slice_cover supports n <= 24");
  if (k_max < 1 || k_max < (1L << (n + 1)))
    throw DomainError("k_max must be at least 2^(n+1) = " + std::to_string(1L << (n + 1)));
  detail::SpokeCoverBuilder b(n);
  b.add_circle();
  for (long k = 1; k <= k_max; ++k) b.add_spoke(k);
  return b.take();
}

}  // namespace juliacert
