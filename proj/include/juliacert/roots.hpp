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

// Certified isolation of the roots of g(z) = p^m(z) - z.
//
// Procedure: quadtree over a square region. A square is discarded when its
// orbit leaves the escape disc or when 0 is excluded from g over it (direct or
// mean-value form). Otherwise a complex Krawczyk test on the disc U of twice
// the square's half-diagonal either certifies a unique root in U, located in
// the inner disc of 1.5 half-diagonals, or the square is split. Squares
// below the size floor are reported as unresolved.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "juliacert/arith.hpp"
#include "juliacert/poly.hpp"

namespace juliacert {

struct Square {
  double x = 0, y = 0, hw = 0;  // exact doubles; [x-hw, x+hw] x [y-hw, y+hw]

  double half_diag() const { return fp::up(hw * std::sqrt(2.0) * (1 + 0x1p-50)); }
  FBall disc() const { return {x, y, half_diag()}; }
  Box box() const {
    Dyadic cx = Dyadic::from_double(x), cy = Dyadic::from_double(y), h = Dyadic::from_double(hw);
    return {cx - h, cx + h, cy - h, cy + h};
  }
};

// w = p^m(z), dw = (p^m)'(z). Returns false if the orbit provably escapes
// (then no periodic point lies in z).
template <class B>
bool iterate_deriv(const Evaluator<B>& ev, const B& z, int m, double R, B& w, B& dw) {
  w = z;
  bool first = true;
  for (int j = 0; j < m; ++j) {
    B d = ev.deriv(w);
    dw = first ? d : d * dw;
    first = false;
    w = ev.eval(w);
    if (w.mag_lo() > R) return false;
  }
  return true;
}

struct CertifiedRoot {
  FBall enclosure;   // contains the root; radius small
  FBall uniqueness;  // the root is the only root of g in this disc
  FBall multiplier;  // (p^m)'(enclosure)
};

inline bool same_root(const CertifiedRoot& a, const CertifiedRoot& b) {
  auto in = [](const FBall& e, const FBall& u) { return e.inside_closed(u.re, u.im, u.rad); };
  return in(b.enclosure, a.uniqueness) || in(a.enclosure, b.uniqueness);
}

// Krawczyk operator K(U) for g = p^m - z - shift over the disc U, with the
// preconditioner taken at the center. `shift` lets callers solve
// p^m(z) - z = 0 (shift 0).
struct KrawczykStep {
  FBall k;
  FBall g_mid;
  FBall gp_u;
  bool ok = false;  // evaluation succeeded (finite, non-escaping)
};

inline KrawczykStep krawczyk(const Evaluator<FBall>& ev, int m, double R, const FBall& U) {
  KrawczykStep s;
  FBall mid = FBall::point(U.re, U.im);
  FBall wm, dwm, wu, dwu;
  if (!iterate_deriv(ev, mid, m, R, wm, dwm)) return s;
  if (!iterate_deriv(ev, U, m, R, wu, dwu)) return s;
  s.g_mid = wm - mid;
  s.gp_u = dwu - FBall::point(1, 0);
  std::complex<double> gp = dwm.mid() - 1.0;
  if (gp == 0.0 || !std::isfinite(std::abs(gp))) return s;
  FBall Y = FBall::point(1.0 / gp);
  FBall t = FBall::point(1, 0) - Y * s.gp_u;
  FBall spread{0, 0, fp::up(t.mag_hi() * U.rad)};
  s.k = mid - Y * s.g_mid + spread;
  s.ok = s.k.finite() && s.g_mid.finite();
  return s;
}

// Shrinks an enclosure of a simple root by iterating K. Keeps the smallest
// valid enclosure found.
inline FBall refine_root(const Evaluator<FBall>& ev, int m, double R, FBall E, double target) {
  for (int it = 0; it < 64 && E.rad > target; ++it) {
    KrawczykStep s = krawczyk(ev, m, R, E);
    if (!s.ok || !(s.k.rad < E.rad * 0.95)) break;
    E = s.k;
  }
  return E;
}

class RootSearch {
 public:
  struct Options {
    int period = 1;
    double escape_R = 2;
    double target = 0x1p-40;  // desired enclosure radius
    double min_hw = 0;        // 0: relative floor of 2^-60 (|z| + 1)
  };

  RootSearch(const Evaluator<FBall>& ev, Square region, Options opt) : ev_(&ev), opt_(opt) {
    stack_.push_back(region);
  }

  bool done() const { return stack_.empty(); }
  std::uint64_t steps() const { return steps_; }
  const std::vector<CertifiedRoot>& roots() const { return roots_; }
  const std::vector<Square>& unresolved() const { return unresolved_; }

  // Processes squares until `budget` evaluation steps are used or the search
  // completes. A square is never split across calls.
  void advance(std::uint64_t budget) {
    std::uint64_t stop = steps_ + budget;
    while (!stack_.empty() && steps_ < stop) {
      Square s = stack_.back();
      stack_.pop_back();
      process(s);
    }
  }

  void run() {
    while (!stack_.empty()) {
      Square s = stack_.back();
      stack_.pop_back();
      process(s);
    }
  }

 private:
  void process(const Square& s) {
    const int m = opt_.period;
    const double R = opt_.escape_R;
    FBall B = s.disc();
    FBall w, dw;
    steps_ += static_cast<std::uint64_t>(m);
    if (!iterate_deriv(*ev_, B, m, R, w, dw)) return;
    FBall g = w - B;
    if (g.finite() && !g.contains_zero()) return;
    FBall gpB = dw - FBall::point(1, 0);
    bool noise_limited = false;
    if (g.finite() && gpB.finite()) {
      FBall mid = FBall::point(s.x, s.y);
      FBall wm, dwm;
      steps_ += static_cast<std::uint64_t>(m);
      if (iterate_deriv(*ev_, mid, m, R, wm, dwm)) {
        FBall gm = wm - mid;
        double spread = fp::up(gpB.mag_hi() * B.rad);
        if (gm.center_mag_lo() > fp::up(gm.rad + spread)) return;
        // Rounding noise at the center dominates: splitting cannot help.
        noise_limited = gm.rad > spread;
      }
      if (!gpB.contains_zero()) {
        double hd = B.rad;
        FBall U{s.x, s.y, fp::up(2 * hd)};
        steps_ += 2 * static_cast<std::uint64_t>(m);
        KrawczykStep k = krawczyk(*ev_, m, R, U);
        if (k.ok && k.k.inside_closed(s.x, s.y, 1.5 * hd)) {
          double target = std::min(opt_.target, hd / 8);
          FBall E = refine_root(*ev_, m, R, k.k, target);
          steps_ += 4 * static_cast<std::uint64_t>(m);
          if (E.rad <= hd / 8) {
            CertifiedRoot r;
            r.enclosure = E;
            r.uniqueness = U;
            FBall we, dwe;
            iterate_deriv(*ev_, E, m, std::numeric_limits<double>::infinity(), we, dwe);
            r.multiplier = dwe;
            roots_.push_back(r);
            return;
          }
        }
      }
    }
    double floor = opt_.min_hw > 0 ? opt_.min_hw
                                   : 0x1p-60 * (std::abs(s.x) + std::abs(s.y) + 1);
    if (s.hw <= floor || noise_limited) {
      unresolved_.push_back(s);
      return;
    }
    double h = s.hw / 2;
    // Children pushed so that they pop in reading order (top-left first).
    stack_.push_back({s.x + h, s.y - h, h});
    stack_.push_back({s.x - h, s.y - h, h});
    stack_.push_back({s.x + h, s.y + h, h});
    stack_.push_back({s.x - h, s.y + h, h});
  }

  const Evaluator<FBall>* ev_;
  Options opt_;
  std::vector<Square> stack_;
  std::vector<CertifiedRoot> roots_;
  std::vector<Square> unresolved_;
  std::uint64_t steps_ = 0;
};

// Removes duplicate certifications of the same root, keeping the first.
inline std::vector<CertifiedRoot> dedupe_roots(const std::vector<CertifiedRoot>& in) {
  std::vector<std::size_t> order(in.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return in[a].enclosure.re < in[b].enclosure.re ||
           (in[a].enclosure.re == in[b].enclosure.re && a < b);
  });
  double maxu = 0;
  for (const auto& r : in) maxu = std::max(maxu, r.uniqueness.rad);
  std::vector<char> dead(in.size(), 0);
  for (std::size_t ii = 0; ii < order.size(); ++ii) {
    std::size_t i = order[ii];
    if (dead[i]) continue;
    for (std::size_t jj = ii + 1; jj < order.size(); ++jj) {
      std::size_t j = order[jj];
      if (in[j].enclosure.re - in[i].enclosure.re > 2 * maxu + 1e-300) break;
      if (dead[j]) continue;
      if (same_root(in[i], in[j])) {
        // keep the lower original index
        if (j < i) {
          dead[i] = 1;
          break;
        }
        dead[j] = 1;
      }
    }
  }
  std::vector<CertifiedRoot> out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (!dead[i]) out.push_back(in[i]);
  return out;
}

// Groups unresolved squares into clusters of touching squares.
inline std::vector<std::vector<Square>> cluster_squares(const std::vector<Square>& sq) {
  std::vector<std::size_t> parent(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < sq.size(); ++i)
    for (std::size_t j = i + 1; j < sq.size(); ++j) {
      bool touch = std::abs(sq[i].x - sq[j].x) <= sq[i].hw + sq[j].hw &&
                   std::abs(sq[i].y - sq[j].y) <= sq[i].hw + sq[j].hw;
      if (touch) parent[find(i)] = find(j);
    }
  std::vector<std::vector<Square>> out;
  std::vector<long> slot(sq.size(), -1);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].push_back(sq[i]);
  }
  return out;
}

}  // namespace juliacert
