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

// The set of pairs (z, c) with z in the Julia set of z^2 + c, closed in C^2.
//
// Emissions: for each period m and each parameter cell C (a square of c
// values) the roots of f_c^m(z) = z are isolated for all c in C at once by
// running the root search with c as a disc coefficient. A certified root
// tube K (containing the root for every c in C) with |multiplier| > 1 yields
// the emission (center K, center C). Cells are split until tubes are thin
// enough. Roots still unresolved at the depth limit are dropped: emitting
// them could place an emission far from the set.
//
// With cells of half diagonal <= 2^-(n+4) and tubes of radius <= 3/4 2^-(n+3)
// every repelling (z, c) lies within 2^-(n+3) of an emission, and every
// emission lies within 2^-(n+2) of the locus.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "juliacert/filled.hpp"

namespace juliacert {

struct FamilyConfig {
  Dyadic slab = 2;                  // |c| bound of the parameter region
  std::size_t max_roots = 1024;     // period cap for emissions: 2^m <= max_roots
  std::size_t basin_max_roots = 64;  // period cap for the attracting-cycle search
  int max_split = 6;                // parameter-cell subdivision depth
  std::uint64_t round_start = 1000;
  std::uint64_t round_cap = 1000000;
  std::uint64_t global_cap = 1000000000;
  unsigned threads = 0;
};

struct FamilyEmission {
  int period = 1;
  double zx = 0, zy = 0, cx = 0, cy = 0;  // exact doubles

  DyadicPoint point() const {
    return {Dyadic::from_double(zx), Dyadic::from_double(zy), Dyadic::from_double(cx),
            Dyadic::from_double(cy)};
  }
};

namespace detail {

inline int max_period_for(std::size_t max_roots) {
  int m = 0;
  std::size_t r = 1;
  while (r * 2 <= max_roots) {
    r *= 2;
    ++m;
  }
  return m;
}

inline Evaluator<FBall> family_evaluator(const Square& cell) {
  FBall c = cell.hw > 0 ? cell.disc() : FBall::point(cell.x, cell.y);
  return Evaluator<FBall>({c, FBall::point(0, 0), FBall::point(1, 0)}, true);
}

inline Square bounding(const FBall& b) {
  double hw = 0x1p-60;
  double r = fp::up(b.rad * (1 + 0x1p-50) + (std::abs(b.re) + std::abs(b.im)) * 0x1p-52);
  while (hw < r) hw *= 2;
  return {b.re, b.im, hw};
}

inline Square bounding(const std::vector<Square>& cl) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : cl) {
    x0 = std::min(x0, s.x - s.hw);
    x1 = std::max(x1, s.x + s.hw);
    y0 = std::min(y0, s.y - s.hw);
    y1 = std::max(y1, s.y + s.hw);
  }
  double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  double hw = 0x1p-60;
  while (hw < std::max(x1 - cx, y1 - cy) * (1 + 0x1p-40)) hw *= 2;
  return {cx, cy, hw};
}

// One unit of emission work: period m, parameter square, z square, split
// depth.
struct CellTask {
  int m;
  Square cell;
  Square zs;
  int depth;
};

struct CellResult {
  std::vector<FamilyEmission> emissions;
  std::vector<CellTask> children;  // parameter subcells still to examine
  std::uint64_t steps = 0;
};

// Isolates the roots of period m for c in the task's cell and z in its
// square. Thin repelling tubes are emitted; wide or borderline roots and
// unresolved clusters become subcell tasks until the depth limit, after
// which only certified repelling roots are kept.
inline CellResult cell_step(const CellTask& t, std::uint64_t n, int max_split) {
  CellResult res;
  const double tube = 0.75 * std::ldexp(1.0, -static_cast<int>(n) - 3);
  Evaluator<FBall> ev = family_evaluator(t.cell);
  double R = fp::up(2 + ev.c().mag_hi());
  RootSearch::Options opt;
  opt.period = t.m;
  opt.escape_R = R;
  opt.target = std::ldexp(1.0, -static_cast<int>(n) - 7);
  if (t.cell.hw > 0) opt.min_hw = std::max(t.cell.hw / 64, 0x1p-50);
  RootSearch search(ev, t.zs, opt);
  search.run();
  res.steps = std::max<std::uint64_t>(search.steps(), 1);
  const bool can_split = t.cell.hw > 0 && t.depth < max_split;
  auto split = [&](const Square& z) {
    double h = t.cell.hw / 2;
    for (int q = 0; q < 4; ++q) {
      Square sub{t.cell.x + ((q & 1) ? h : -h), t.cell.y + ((q & 2) ? h : -h), h};
      res.children.push_back({t.m, sub, z, t.depth + 1});
    }
  };
  const double cx = t.cell.x, cy = t.cell.y;
  for (const auto& r : dedupe_roots(search.roots())) {
    const FBall& K = r.enclosure;
    if (r.multiplier.mag_hi() < 1) continue;  // attracting for every c in the cell
    const bool repelling = r.multiplier.mag_lo() > 1;
    if (repelling && K.rad <= tube) {
      res.emissions.push_back({t.m, K.re, K.im, cx, cy});
    } else if (can_split) {
      split(bounding(r.uniqueness));
    } else if (repelling && K.rad <= 2 * tube) {
      res.emissions.push_back({t.m, K.re, K.im, cx, cy});
    }
  }
  if (can_split)
    for (const auto& cl : cluster_squares(search.unresolved())) split(bounding(cl));
  return res;
}

// All emissions of a task and its descendants.
inline std::vector<FamilyEmission> cell_emissions(const CellTask& root, std::uint64_t n,
                                                  int max_split) {
  std::vector<FamilyEmission> out;
  std::vector<CellTask> stack{root};
  while (!stack.empty()) {
    CellTask t = stack.back();
    stack.pop_back();
    CellResult r = cell_step(t, n, max_split);
    out.insert(out.end(), r.emissions.begin(), r.emissions.end());
    for (auto it = r.children.rbegin(); it != r.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

}  // namespace detail

// Global emission stream over the parameter disc |c| <= slab, in order of
// period, then parameter cells row by row. Shared and memoized: consumers
// see one consistent sequence.
class A1Enumerator {
 public:
  explicit A1Enumerator(std::uint64_t n, FamilyConfig cfg = {}) : n_(n), cfg_(cfg) {
    h_ = std::ldexp(1.0, -static_cast<int>(n) - 4);
    slab_ = cfg.slab.to_double();
    k_ = static_cast<long>(std::ceil(slab_ / h_)) + 1;
    cap_ = detail::max_period_for(cfg.max_roots);
    ci_ = cj_ = -k_;
  }

  std::uint64_t precision() const { return n_; }
  int max_period() const { return cap_; }
  double cell_pitch() const { return h_; }
  long cell_index(double c) const { return static_cast<long>(std::floor(c / h_)); }

  // Cell (i, j): the parameter square [i h, (i+1) h] x [j h, (j+1) h],
  // h = 2^-(n+4), with z ranging over the whole escape disc.
  std::vector<FamilyEmission> cell(int m, long i, long j) const {
    Square c{(i + 0.5) * h_, (j + 0.5) * h_, h_ / 2};
    double R = 2 + slab_ + 2 * h_;
    double hw = 1;
    while (hw < R) hw *= 2;
    return detail::cell_emissions({m, c, {0, 0, hw}, 0}, n_, cfg_.max_split);
  }

  bool cell_in_slab(long i, long j) const {
    double gx = std::max({0.0, i * h_, -(i + 1) * h_});
    double gy = std::max({0.0, j * h_, -(j + 1) * h_});
    return gx * gx + gy * gy <= slab_ * slab_;
  }

  // The idx-th emission; nullopt once the period cap is reached.
  std::optional<FamilyEmission> at(std::size_t idx) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (prefix_.size() <= idx)
      if (!advance()) return std::nullopt;
    return prefix_[idx];
  }

 private:
  bool advance() const {
    for (;;) {
      if (m_ > cap_) return false;
      int m = m_;
      long i = ci_, j = cj_;
      if (++ci_ >= k_) {
        ci_ = -k_;
        if (++cj_ >= k_) {
          cj_ = -k_;
          ++m_;
        }
      }
      if (!cell_in_slab(i, j)) continue;
      auto e = cell(m, i, j);
      if (e.empty()) continue;
      prefix_.insert(prefix_.end(), e.begin(), e.end());
      return true;
    }
  }

  std::uint64_t n_;
  FamilyConfig cfg_;
  double h_, slab_;
  long k_;
  int cap_;
  mutable std::mutex mu_;
  mutable std::vector<FamilyEmission> prefix_;
  mutable int m_ = 1;
  mutable long ci_, cj_;
};

// Stream cursor over a shared enumerator; ends with a period-cap marker.
class A1Stream {
 public:
  explicit A1Stream(std::shared_ptr<const A1Enumerator> e) : e_(std::move(e)) {}
  std::variant<FamilyEmission, PeriodCapMarker> next() {
    auto v = e_->at(i_);
    if (!v) return PeriodCapMarker{e_->max_period()};
    ++i_;
    return *v;
  }

 private:
  std::shared_ptr<const A1Enumerator> e_;
  std::size_t i_ = 0;
};

inline A1Stream a1_enumerate(std::uint64_t n, FamilyConfig cfg = {}) {
  return A1Stream(std::make_shared<A1Enumerator>(n, cfg));
}

// ---------------------------------------------------------------------------

// Memoized emissions near query points, shared by all queries of one
// precision. The near-check only needs emissions within 2^-(n+2) of the
// query, so it consults the cells and z-tiles that can contain them instead
// of the whole stream.
class LocalEmissions {
 public:
  LocalEmissions(std::uint64_t n, FamilyConfig cfg) : n_(n), cfg_(cfg) {
    h_ = std::ldexp(1.0, -static_cast<int>(n) - 4);
    tile_ = std::ldexp(1.0, -static_cast<int>(n) - 1);
    cap_ = detail::max_period_for(cfg.max_roots);
  }

  std::uint64_t precision() const { return n_; }
  int max_period() const { return cap_; }
  double cell_pitch() const { return h_; }
  double tile() const { return tile_; }
  double slab() const { return cfg_.slab.to_double(); }
  int max_split() const { return cfg_.max_split; }

  // Memoized single step of emission work. `cost` receives the work done
  // when the entry was computed by this call, else 0.
  const detail::CellResult& step(const detail::CellTask& t, std::uint64_t& cost) const {
    Key key{t.m, t.cell.x, t.cell.y, t.cell.hw, t.zs.x, t.zs.y, t.zs.hw, t.depth};
    cost = 0;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return *it->second;
    }
    auto v = std::make_unique<detail::CellResult>(detail::cell_step(t, n_, cfg_.max_split));
    cost = v->steps;
    std::lock_guard<std::mutex> lock(mu_);
    return *memo_.emplace(key, std::move(v)).first->second;
  }

 private:
  using Key = std::tuple<int, double, double, double, double, double, double, int>;
  std::uint64_t n_;
  FamilyConfig cfg_;
  double h_, tile_;
  int cap_;
  mutable std::mutex mu_;
  mutable std::map<Key, std::unique_ptr<detail::CellResult>> memo_;
};

struct FamilyPoint {
  ComplexOracle z;
  ComplexOracle c;
};

// Near check: halts with 1 once an emission lies within 2^-(n+2) of a
// 2^-(n+4)-approximation p of (z, c). Halts whenever (z, c) is within
// 2^-(n+4) of the family set (up to the period cap); never when it is
// 2^-n away. Work proceeds by period: first the exact parameter of p, then
// all parameter cells within reach.
class NearMachine : public Machine {
 public:
  NearMachine(std::shared_ptr<const LocalEmissions> L, const FamilyPoint& pt)
      : L_(std::move(L)) {
    const std::uint64_t q = L_->precision() + 5;
    auto [zx, zy] = pt.z.query(q);
    auto [cx, cy] = pt.c.query(q);
    p_ = {zx, zy, cx, cy};
    const int n = static_cast<int>(L_->precision());
    r2_ = Dyadic::pow2(-2 * (n + 2));
    const double reach = std::ldexp(1.0, -n - 2) * (1 + 0x1p-30);
    pz_ = {zx.to_double(), zy.to_double()};
    pc_ = {cx.to_double(), cy.to_double()};
    const double t = L_->tile();
    for (long tj = static_cast<long>(std::floor((pz_[1] - reach) / t));
         tj <= static_cast<long>(std::floor((pz_[1] + reach) / t)); ++tj)
      for (long ti = static_cast<long>(std::floor((pz_[0] - reach) / t));
           ti <= static_cast<long>(std::floor((pz_[0] + reach) / t)); ++ti)
        tiles_.emplace_back(ti, tj);
    if (cx.exact_double() && cy.exact_double()) exact_ = Square{pc_[0], pc_[1], 0};
    const double h = L_->cell_pitch();
    const double slab = L_->slab();
    for (long j = static_cast<long>(std::floor((pc_[1] - reach) / h));
         j <= static_cast<long>(std::floor((pc_[1] + reach) / h)); ++j)
      for (long i = static_cast<long>(std::floor((pc_[0] - reach) / h));
           i <= static_cast<long>(std::floor((pc_[0] + reach) / h)); ++i) {
        double gx = std::max({0.0, i * h, -(i + 1) * h});
        double gy = std::max({0.0, j * h, -(j + 1) * h});
        if (gx * gx + gy * gy > slab * slab) continue;
        cells_.push_back({(i + 0.5) * h, (j + 0.5) * h, h / 2});
      }
  }
  const char* name() const override { return "near"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    std::uint64_t stop = steps_ + budget;
    while (steps_ < stop) {
      if (stack_.empty() && !refill()) {
        steps_ = stop;  // period cap: pending forever
        return false;
      }
      detail::CellTask t = stack_.back();
      stack_.pop_back();
      std::uint64_t cost = 0;
      const detail::CellResult& r = L_->step(t, cost);
      steps_ += cost + 1;
      for (const auto& e : r.emissions)
        if (close(e)) {
          halt(1);
          return true;
        }
      for (auto it = r.children.rbegin(); it != r.children.rend(); ++it)
        if (reachable(it->cell)) stack_.push_back(*it);
    }
    return false;
  }

 private:
  // Queues the tasks of the next period. Periods are walked first at the
  // exact parameter, then over all parameter cells within reach.
  bool refill() {
    for (;;) {
      if (phase_ == 0 && (!exact_ || m_ > L_->max_period())) {
        phase_ = 1;
        m_ = 1;
      }
      if (m_ > L_->max_period()) return false;
      const int m = m_++;
      const double t = L_->tile();
      for (auto it = tiles_.rbegin(); it != tiles_.rend(); ++it) {
        Square zs{(it->first + 0.5) * t, (it->second + 0.5) * t, t / 2};
        if (phase_ == 0) {
          stack_.push_back({m, *exact_, zs, 0});
        } else {
          for (auto c = cells_.rbegin(); c != cells_.rend(); ++c) stack_.push_back({m, *c, zs, 0});
        }
      }
      if (!stack_.empty()) return true;
    }
  }

  // Subcells that cannot hold an emission within reach of p are dropped.
  bool reachable(const Square& c) const {
    double dx = std::max(0.0, std::abs(c.x - pc_[0]) - c.hw);
    double dy = std::max(0.0, std::abs(c.y - pc_[1]) - c.hw);
    double r = std::ldexp(1.0, -static_cast<int>(L_->precision()) - 2) * (1 + 0x1p-30);
    return dx * dx + dy * dy <= r * r;
  }

  bool close(const FamilyEmission& e) const {
    double d0 = e.zx - pz_[0], d1 = e.zy - pz_[1], d2 = e.cx - pc_[0], d3 = e.cy - pc_[1];
    double r = std::ldexp(1.0, -static_cast<int>(L_->precision()) - 2);
    if (d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3 > r * r * 1.01) return false;
    return dist2(e.point(), p_) <= r2_;
  }

  std::shared_ptr<const LocalEmissions> L_;
  DyadicPoint p_;
  Dyadic r2_;
  std::array<double, 2> pz_{}, pc_{};
  std::vector<std::pair<long, long>> tiles_;
  std::optional<Square> exact_;
  std::vector<Square> cells_;
  std::vector<detail::CellTask> stack_;
  int phase_ = 0;
  int m_ = 1;
};

// Shared data for the basin check at one parameter: the periodic catalog of
// z^2 + c and the first attracting cycle found, with self-mapped discs.
class BasinContext {
 public:
  BasinContext(const ComplexOracle& c, std::size_t max_roots)
      : poly_(PolyEnclosure::quadratic(c)) {
    IsolationOptions iso;
    iso.max_roots = max_roots;
    cat_ = std::make_shared<PeriodicCatalog>(poly_, iso);
    R_ = cat_->escape_R();
  }

  const PolyEnclosure& poly() const { return poly_; }
  const Evaluator<FBall>& evaluator() const { return cat_->evaluator(); }
  double escape_R() const { return R_; }
  int max_period() const { return cat_->max_period(); }

  // Searches period m (memoized). Returns the work done by this call.
  std::uint64_t search(int m) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (m <= searched_ || found_) return 0;
    const PeriodBatch& b = cat_->batch(m);
    searched_ = m;
    for (std::size_t i = 0; i < b.roots.size() && !found_; ++i) {
      if (b.exact_period[i] != m || !(b.roots[i].multiplier.mag_hi() < 1)) continue;
      std::vector<DomainDisc> ds;
      std::size_t k = i;
      bool ok = true;
      for (int j = 0; j < m && ok; ++j) {
        const FBall& e = b.roots[k].enclosure;
        auto r = detail::self_mapped_radius(cat_->evaluator(), m, e.re, e.im);
        if (!r || b.successor[k] < 0) {
          ok = false;
          break;
        }
        ds.push_back({e.re, e.im, r->to_double()});
        k = static_cast<std::size_t>(b.successor[k]);
      }
      if (ok) {
        domains_ = ds;
        found_ = true;
      }
    }
    return std::max<std::uint64_t>(b.cost, 1);
  }

  bool found() const {
    std::lock_guard<std::mutex> lock(mu_);
    return found_;
  }
  std::vector<DomainDisc> domains() const {
    std::lock_guard<std::mutex> lock(mu_);
    return domains_;
  }

 private:
  PolyEnclosure poly_;
  std::shared_ptr<PeriodicCatalog> cat_;
  double R_;
  mutable std::mutex mu_;
  mutable int searched_ = 0;
  mutable bool found_ = false;
  mutable std::vector<DomainDisc> domains_;
};

// Basin check: halts with 0 once the orbit of z certifiably escapes or
// enters a self-mapped disc around a point of an attracting cycle.
class BasinMachine : public Machine {
 public:
  BasinMachine(std::shared_ptr<const BasinContext> B, const FamilyPoint& pt) : B_(std::move(B)) {
    auto [x, y] = pt.z.query(60);
    Dyadic r = pt.z.is_exact() ? Dyadic() : Dyadic::pow2(-60);
    orbit_ = std::make_unique<detail::OrbitTracker>(B_->poly(), B_->evaluator(), B_->escape_R(),
                                                    point2(x, y), r);
  }
  const char* name() const override { return "basin"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    std::uint64_t stop = steps_ + budget;
    while (steps_ < stop) {
      // Alternate: spend on the cycle search no more than on tracking.
      if (!found_ && m_ <= B_->max_period() && search_steps_ <= track_steps_) {
        std::uint64_t c = B_->search(m_++);
        search_steps_ += c + 1;
        steps_ += c + 1;
        if (B_->found()) {
          found_ = true;
          domains_ = B_->domains();
        }
        continue;
      }
      if (!found_ && B_->found()) {
        found_ = true;
        domains_ = B_->domains();
      }
      if (!orbit_->step()) {
        halt(0);
        return true;
      }
      std::uint64_t c = orbit_->cost() + orbit_->take_replay();
      steps_ += c;
      track_steps_ += c;
      FBall w = orbit_->disc();
      for (const auto& D : domains_)
        if (w.finite() && w.inside_closed(D.x, D.y, D.r)) {
          halt(0);
          return true;
        }
    }
    return false;
  }

 private:
  std::shared_ptr<const BasinContext> B_;
  std::unique_ptr<detail::OrbitTracker> orbit_;
  std::vector<DomainDisc> domains_;
  bool found_ = false;
  int m_ = 1;
  std::uint64_t search_steps_ = 0, track_steps_ = 0;
};

inline SemiVerdict m1_near_check(std::shared_ptr<const LocalEmissions> L, const FamilyPoint& pt,
                                 std::uint64_t budget) {
  return run_machine(std::make_shared<NearMachine>(std::move(L), pt), budget);
}
inline SemiVerdict m1_near_check(const FamilyPoint& pt, std::uint64_t n, std::uint64_t budget,
                                 FamilyConfig cfg = {}) {
  return m1_near_check(std::make_shared<LocalEmissions>(n, cfg), pt, budget);
}
inline SemiVerdict m2_basin_check(const FamilyPoint& pt, std::uint64_t budget,
                                  FamilyConfig cfg = {}) {
  auto B = std::make_shared<BasinContext>(pt.c, cfg.basin_max_roots);
  return run_machine(std::make_shared<BasinMachine>(B, pt), budget);
}

// Query context shared by many points of one precision (and, for slices,
// one parameter).
class FamilySolver {
 public:
  explicit FamilySolver(std::uint64_t n, FamilyConfig cfg = {})
      : n_(n), cfg_(cfg), local_(std::make_shared<LocalEmissions>(n, cfg)) {}

  const FamilyConfig& config() const { return cfg_; }
  std::uint64_t precision() const { return n_; }

  // 1 if (z, c) is in the family set, 0 if the 2^-n ball around it misses
  // it, either otherwise.
  QueryAnswer query(const FamilyPoint& pt) const {
    auto [cx, cy] = pt.c.query(8);
    Dyadic bound = cfg_.slab + Dyadic::pow2(-7);
    if (cx * cx + cy * cy > bound * bound)
      throw DomainError("parameter outside the slab |c| <= " + cfg_.slab.str());
    NearMachine m1(local_, pt);
    BasinMachine m2(basin(pt.c), pt);
    std::uint64_t total = 0;
    for (std::uint64_t b = cfg_.round_start;; b = std::min(b * 2, cfg_.round_cap)) {
      for (Machine* m : {static_cast<Machine*>(&m1), static_cast<Machine*>(&m2)}) {
        std::uint64_t before = m->steps();
        bool h = m->run(b);
        total += m->steps() - before;
        if (h) return {m->bit(), m->name(), total};
        if (total >= cfg_.global_cap)
          throw Inconclusive("no machine halted within " + std::to_string(cfg_.global_cap) +
                             " steps");
      }
    }
  }

 private:
  std::shared_ptr<const BasinContext> basin(const ComplexOracle& c) const {
    // Only exact parameters are shared; other oracles get a fresh context.
    if (!c.is_exact()) return std::make_shared<BasinContext>(c, cfg_.basin_max_roots);
    std::string key = c.re.exact_value()->str() + " " + c.im.exact_value()->str();
    std::lock_guard<std::mutex> lock(mu_);
    auto it = basins_.find(key);
    if (it != basins_.end()) return it->second;
    auto b = std::make_shared<BasinContext>(c, cfg_.basin_max_roots);
    basins_.emplace(key, b);
    return b;
  }

  std::uint64_t n_;
  FamilyConfig cfg_;
  std::shared_ptr<const LocalEmissions> local_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const BasinContext>> basins_;
};

inline QueryAnswer bbj_query(const FamilyPoint& pt, std::uint64_t n, FamilyConfig cfg = {}) {
  return FamilySolver(n, cfg).query(pt);
}

// Grid answers of the query over z in the window at pitch 2^-(n+2) for a
// fixed parameter. A rendering of the slice, not a certified approximation
// of it.
inline GridResult bbj_slice_grid(const ComplexOracle& c, std::uint64_t n, const Box& window,
                                 FamilyConfig cfg = {}) {
  FamilySolver solver(n, cfg);
  const int g = static_cast<int>(n) + 2;
  long i0 = window.re_lo.mul_pow2(g).ceil_to(0).numerator().get_si();
  long i1 = window.re_hi.mul_pow2(g).floor_to(0).numerator().get_si();
  long j0 = window.im_lo.mul_pow2(g).ceil_to(0).numerator().get_si();
  long j1 = window.im_hi.mul_pow2(g).floor_to(0).numerator().get_si();
  if (i1 < i0 || j1 < j0) return GridResult{g, i0, j0, 0, 0, {}};
  return sweep_grid(
      g, i0, j0, i1 - i0 + 1, j1 - j0 + 1,
      [&](long i, long j) {
        FamilyPoint pt{ComplexOracle::exact(Dyadic::from_parts(i, g), Dyadic::from_parts(j, g)), c};
        return solver.query(pt).bit == 1;
      },
      cfg.threads);
}

inline Cover bbj_slice_render(const ComplexOracle& c, std::uint64_t n, const Box& window,
                              FamilyConfig cfg = {}) {
  return bbj_slice_grid(c, n, window, cfg).to_cover(static_cast<int>(n) + 2);
}

}  // namespace juliacert
