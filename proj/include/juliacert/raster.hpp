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

// Outer rasterization of planar ball unions on the dyadic grid and
// separation by 4-connected flood fill.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "juliacert/arith.hpp"
#include "juliacert/geometry.hpp"

namespace juliacert {

// Cells [i h, (i+1) h] x [j h, (j+1) h], h = 2^-g, for i in [i0, i0 + nx),
// j in [j0, j0 + ny). A cell is marked when it meets a rasterized ball.
class Raster {
 public:
  static constexpr std::size_t kMaxCells = std::size_t{1} << 26;

  Raster(int g, long i0, long j0, long nx, long ny) : g_(g), i0_(i0), j0_(j0), nx_(nx), ny_(ny) {
    if (nx <= 0 || ny <= 0 || static_cast<double>(nx) * static_cast<double>(ny) > kMaxCells)
      throw DomainError("raster frame too large for pitch 2^-" + std::to_string(g));
    h_ = std::ldexp(1.0, -g);
    cells_.assign(static_cast<std::size_t>(nx * ny), 0);
  }

  // Frame covering [x0, x1] x [y0, y1] plus `pad` cells on every side.
  static Raster covering(int g, double x0, double x1, double y0, double y1, long pad = 2) {
    double s = std::ldexp(1.0, g);
    long i0 = static_cast<long>(std::floor(x0 * s)) - pad;
    long i1 = static_cast<long>(std::floor(x1 * s)) + pad;
    long j0 = static_cast<long>(std::floor(y0 * s)) - pad;
    long j1 = static_cast<long>(std::floor(y1 * s)) + pad;
    return Raster(g, i0, j0, i1 - i0 + 1, j1 - j0 + 1);
  }

  int pitch_exponent() const { return g_; }
  double pitch() const { return h_; }
  long nx() const { return nx_; }
  long ny() const { return ny_; }
  bool marked(long i, long j) const { return cells_[index(i, j)] != 0; }
  bool in_frame(long i, long j) const {
    return i >= i0_ && i < i0_ + nx_ && j >= j0_ && j < j0_ + ny_;
  }

  // Marks every cell meeting the closed ball exactly (dyadic predicate).
  void mark_ball(const Ball& b) {
    double cx = b.center[0].to_double(), cy = b.center[1].to_double(), r = b.radius.to_double();
    double slack = (std::abs(cx) + std::abs(cy) + r) * 0x1p-45 + 0x1p-1000;
    for_cells_near(cx, cy, r + slack, [&](long i, long j) {
      double dx = std::max({0.0, i * h_ - cx, cx - (i + 1) * h_});
      double dy = std::max({0.0, j * h_ - cy, cy - (j + 1) * h_});
      double d = std::sqrt(dx * dx + dy * dy);
      if (d < r - slack) return mark(i, j);
      if (d > r + slack) return;
      if (cell_meets_exact(i, j, b)) mark(i, j);
    });
  }

  // Marks every cell that may meet the disc (outward rounded).
  void mark_disc(const FBall& w) {
    double r = fp::up(w.rad + (std::abs(w.re) + std::abs(w.im)) * 0x1p-50);
    for_cells_near(w.re, w.im, r, [&](long i, long j) {
      if (cell_dist_lo(i, j, w.re, w.im) <= r) mark(i, j);
    });
  }

  // Cells (in frame) that may meet the disc.
  std::vector<std::size_t> cells_meeting(const FBall& w) const {
    std::vector<std::size_t> out;
    double r = fp::up(w.rad + (std::abs(w.re) + std::abs(w.im)) * 0x1p-50);
    for_cells_near(w.re, w.im, r, [&](long i, long j) {
      if (cell_dist_lo(i, j, w.re, w.im) <= r) out.push_back(index(i, j));
    });
    return out;
  }

  // Cells containing the exact point (up to four when it lies on grid lines).
  std::vector<std::size_t> cells_containing(const DyadicPoint& p) const {
    std::vector<std::size_t> out;
    std::vector<long> is = grid_coords(p[0]), js = grid_coords(p[1]);
    for (long i : is)
      for (long j : js)
        if (in_frame(i, j)) out.push_back(index(i, j));
    return out;
  }

  // True when no path of unmarked 4-adjacent cells joins a cell of `from` to
  // a cell of `to`. Marked starting cells are skipped.
  bool separated(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) const {
    std::vector<std::uint8_t> seen(cells_.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t c : from)
      if (!cells_[c] && !seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      long i = static_cast<long>(c % static_cast<std::size_t>(nx_));
      long j = static_cast<long>(c / static_cast<std::size_t>(nx_));
      auto visit = [&](long a, long b) {
        if (a < 0 || b < 0 || a >= nx_ || b >= ny_) return;
        std::size_t k = static_cast<std::size_t>(b * nx_ + a);
        if (!cells_[k] && !seen[k]) {
          seen[k] = 1;
          stack.push_back(k);
        }
      };
      visit(i + 1, j);
      visit(i - 1, j);
      visit(i, j + 1);
      visit(i, j - 1);
    }
    for (std::size_t c : to)
      if (seen[c]) return false;
    return true;
  }

  bool all_marked(const std::vector<std::size_t>& cells) const {
    for (std::size_t c : cells)
      if (!cells_[c]) return false;
    return !cells.empty();
  }
  bool any_marked(const std::vector<std::size_t>& cells) const {
    for (std::size_t c : cells)
      if (cells_[c]) return true;
    return false;
  }

 private:
  std::size_t index(long i, long j) const {
    return static_cast<std::size_t>((j - j0_) * nx_ + (i - i0_));
  }
  void mark(long i, long j) { cells_[index(i, j)] = 1; }

  template <class F>
  void for_cells_near(double cx, double cy, double r, F&& f) const {
    double s = std::ldexp(1.0, g_);
    long ia = std::max(i0_, static_cast<long>(std::floor((cx - r) * s)) - 1);
    long ib = std::min(i0_ + nx_ - 1, static_cast<long>(std::floor((cx + r) * s)) + 1);
    long ja = std::max(j0_, static_cast<long>(std::floor((cy - r) * s)) - 1);
    long jb = std::min(j0_ + ny_ - 1, static_cast<long>(std::floor((cy + r) * s)) + 1);
    for (long j = ja; j <= jb; ++j)
      for (long i = ia; i <= ib; ++i) f(i, j);
  }

  double cell_dist_lo(long i, long j, double cx, double cy) const {
    double dx = std::max({0.0, i * h_ - cx, cx - (i + 1) * h_});
    double dy = std::max({0.0, j * h_ - cy, cy - (j + 1) * h_});
    return fp::down(std::sqrt(dx * dx + dy * dy) * (1 - 0x1p-50));
  }

  bool cell_meets_exact(long i, long j, const Ball& b) const {
    Dyadic h = Dyadic::pow2(-g_);
    Dyadic x0 = Dyadic(i) * h, x1 = Dyadic(i + 1) * h, y0 = Dyadic(j) * h, y1 = Dyadic(j + 1) * h;
    auto gap = [](const Dyadic& lo, const Dyadic& hi, const Dyadic& c) {
      if (c < lo) return lo - c;
      if (c > hi) return c - hi;
      return Dyadic();
    };
    Dyadic dx = gap(x0, x1, b.center[0]), dy = gap(y0, y1, b.center[1]);
    return dx * dx + dy * dy <= b.radius * b.radius;
  }

  std::vector<long> grid_coords(const Dyadic& x) const {
    Dyadic s = x.mul_pow2(g_);
    Dyadic f = s.floor_to(0);
    long i = f.numerator().get_si();
    if (f == s) return {i - 1, i};
    return {i};
  }

  int g_;
  long i0_, j0_, nx_, ny_;
  double h_;
  std::vector<std::uint8_t> cells_;
};

enum class Separation { Separated, NotSeparated };

// Outer rasterization of E at pitch 2^-g over a padded frame containing E, a
// and b. Separated when a or b lies in a marked cell, or when no 4-connected
// path of unmarked cells joins them.
inline Separation separates(const Cover& E, const DyadicPoint& a, const DyadicPoint& b, int g) {
  if (E.dim != 2 || a.size() != 2 || b.size() != 2) throw DomainError("separation is planar");
  double x0 = std::min(a[0].to_double(), b[0].to_double());
  double x1 = std::max(a[0].to_double(), b[0].to_double());
  double y0 = std::min(a[1].to_double(), b[1].to_double());
  double y1 = std::max(a[1].to_double(), b[1].to_double());
  for (const auto& ball : E.balls) {
    double r = ball.radius.to_double() * (1 + 0x1p-40);
    x0 = std::min(x0, ball.center[0].to_double() - r);
    x1 = std::max(x1, ball.center[0].to_double() + r);
    y0 = std::min(y0, ball.center[1].to_double() - r);
    y1 = std::max(y1, ball.center[1].to_double() + r);
  }
  Raster ras = Raster::covering(g, x0, x1, y0, y1, 3);
  for (const auto& ball : E.balls) ras.mark_ball(ball);
  auto ca = ras.cells_containing(a);
  auto cb = ras.cells_containing(b);
  if (ras.any_marked(ca) || ras.any_marked(cb)) return Separation::Separated;
  return ras.separated(ca, cb) ? Separation::Separated : Separation::NotSeparated;
}

}  // namespace juliacert
