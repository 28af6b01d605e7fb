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

// Filled Julia sets: five semi-deciding machines, their dovetailed
// combination answering "is d within 2^-n of K_p?", and grid covers.
//
// Each machine is resumable: run(budget) performs at most about `budget`
// evaluation steps and reports whether it has halted. Halting answers are
// one-sided:
//   ext   halts 0 only if dist(d, K) > 7/6 2^-n   (never when dist <= 2^-n)
//   jul   halts 1 only if dist(d, K) < 11/6 2^-n  (never when dist > 2 2^-n)
//   hyp   halts 1 only if d lies in an attracting basin
//   par   halts 1 only if d lies in a parabolic basin
//   sieg  halts 1 only if d is within 5/3 2^-n of a Siegel disc closure
// Every answer is therefore 0 => dist > 2^-n and 1 => dist <= 2 2^-n.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "juliacert/certificate.hpp"
#include "juliacert/grid.hpp"
#include "juliacert/periodic.hpp"
#include "juliacert/raster.hpp"
#include "juliacert/roots.hpp"

namespace juliacert {

struct FilledConfig {
  std::uint64_t round_start = 1000;       // first-round budget per machine
  std::uint64_t round_cap = 1000000;      // per machine per round
  std::uint64_t global_cap = 1000000000;  // total steps before Inconclusive
  int local_period_cap = 32;              // deepest period searched near a query
  IsolationOptions isolation;
  unsigned threads = 0;                   // 0: hardware concurrency
};

// Conservative double disc contained in a certified domain.
struct DomainDisc {
  double x, y, r;
};

struct SiegelTarget {
  FBall center;     // tiny enclosure of the Siegel point
  FBall companion;  // tiny enclosure of a point of K outside the disc
};

// A polynomial with its certificate and the derived data shared by all
// queries: escape radius, periodic-point catalog, domains.
class FilledProblem {
 public:
  FilledProblem(PolyEnclosure p, OrbitCertificate cert = {}, FilledConfig cfg = {})
      : poly_(std::move(p)), cert_(std::move(cert)), cfg_(cfg) {
    R_dyadic_ = escape_radius(poly_);
    R_ = R_dyadic_.to_double();
    catalog_ = std::make_shared<PeriodicCatalog>(poly_, cfg_.isolation);
    for (std::size_t i = 0; i < cert_.orbits.size(); ++i) {
      const CertOrbit& o = cert_.orbits[i];
      for (const auto& d : o.domains) domains_.push_back(to_disc(d));
      for (const auto& s : o.sectors) sectors_.push_back(s);
      if (o.kind == OrbitKind::Siegel) add_siegel(i);
    }
  }

  const PolyEnclosure& poly() const { return poly_; }
  const OrbitCertificate& cert() const { return cert_; }
  const FilledConfig& config() const { return cfg_; }
  double escape_R() const { return R_; }
  const Dyadic& escape_R_dyadic() const { return R_dyadic_; }
  const Evaluator<FBall>& evaluator() const { return catalog_->evaluator(); }
  const PeriodicCatalog& catalog() const { return *catalog_; }
  const std::vector<DomainDisc>& domains() const { return domains_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  const std::vector<SiegelTarget>& siegel() const { return siegel_; }

  // Sorted repelling emission points of period m (x-major), for range lookups.
  const std::vector<std::pair<double, double>>& repelling_points(int m) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = rep_.find(m);
    if (it != rep_.end()) return it->second;
    const PeriodBatch& b = catalog_->batch(m);
    std::vector<std::pair<double, double>> v;
    for (const auto& r : b.roots)
      if (r.multiplier.mag_lo() > 1) v.emplace_back(r.enclosure.re, r.enclosure.im);
    std::sort(v.begin(), v.end());
    return rep_.emplace(m, std::move(v)).first->second;
  }

 private:
  static DomainDisc to_disc(const Ball& b) {
    FBall d = detail::inner_disc(b);
    return {d.re, d.im, d.rad};
  }

  void add_siegel(std::size_t i) {
    const CertOrbit& o = cert_.orbits[i];
    auto pts = refine_certificate_orbit(poly_, cert_, i, 40);
    FBall comp;
    if (o.companion_is_beta) {
      // The repelling fixed point with the largest real part.
      const PeriodBatch& b = catalog_->batch(1);
      const CertifiedRoot* best = nullptr;
      for (const auto& r : b.roots)
        if (r.multiplier.mag_lo() > 1 && (!best || r.enclosure.re > best->enclosure.re)) best = &r;
      if (!best) throw CertificateInvalid("no repelling fixed point to use as companion");
      comp = best->enclosure;
    } else {
      Square sq = detail::bounding_square(*o.companion);
      RootSearch::Options opt;
      opt.period = 1;
      opt.escape_R = R_;
      RootSearch s(evaluator(), sq, opt);
      s.run();
      auto roots = dedupe_roots(s.roots());
      std::vector<FBall> in;
      for (const auto& r : roots)
        if (o.companion->contains(point2(Dyadic::from_double(r.enclosure.re),
                                         Dyadic::from_double(r.enclosure.im))))
          in.push_back(r.enclosure);
      if (in.size() != 1) throw CertificateInvalid("companion ball must isolate one fixed point");
      comp = in[0];
    }
    for (const auto& p : pts)
      siegel_.push_back({FBall::from_dyadic(p[0], p[1], Dyadic::pow2(-40)), comp});
  }

  PolyEnclosure poly_;
  OrbitCertificate cert_;
  FilledConfig cfg_;
  Dyadic R_dyadic_;
  double R_ = 2;
  std::shared_ptr<PeriodicCatalog> catalog_;
  std::vector<DomainDisc> domains_;
  std::vector<Sector> sectors_;
  std::vector<SiegelTarget> siegel_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<std::pair<double, double>>> rep_;
};

// ---------------------------------------------------------------------------

class Machine {
 public:
  virtual ~Machine() = default;
  virtual const char* name() const = 0;
  // Runs for about `budget` more steps; true once halted.
  virtual bool run(std::uint64_t budget) = 0;
  bool halted() const { return halted_; }
  int bit() const { return bit_; }
  std::uint64_t steps() const { return steps_; }

 protected:
  void halt(int b) {
    halted_ = true;
    bit_ = b;
  }
  std::uint64_t steps_ = 0;
  bool halted_ = false;
  int bit_ = -1;
};

struct SemiVerdict {
  bool halted = false;
  int bit = -1;
  std::uint64_t steps = 0;
  std::shared_ptr<Machine> state;  // resume with state->run(more)
};

namespace detail {

inline std::pair<double, double> to_doubles(const DyadicPoint& d, double& err) {
  double x = d[0].to_double(), y = d[1].to_double();
  err = 0;
  if (!d[0].exact_double() || !d[1].exact_double()) err = (std::abs(x) + std::abs(y)) * 0x1p-50 + 0x1p-1000;
  return {x, y};
}

inline double pow2d(long k) { return std::ldexp(1.0, static_cast<int>(k)); }

// Smallest power of two >= x.
inline double pow2_above(double x) {
  double h = 0x1p-200;
  while (h < x) h *= 2;
  return h;
}

inline double square_dist_lo(const Square& s, double px, double py) {
  double dx = std::max(0.0, std::abs(s.x - px) - s.hw);
  double dy = std::max(0.0, std::abs(s.y - py) - s.hw);
  return fp::down(std::sqrt(dx * dx + dy * dy) * (1 - 0x1p-50) -
                  (std::abs(s.x) + std::abs(px) + std::abs(s.y) + std::abs(py)) * 0x1p-52);
}

}  // namespace detail

// Exterior machine: covers B(d, 7/6 2^-n) by squares and certifies that each
// escapes the disc of radius R under iteration, splitting squares whose
// enclosures grow too wide. Halts with 0 when nothing is left.
class ExteriorMachine : public Machine {
 public:
  ExteriorMachine(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n) : P_(&P) {
    double err;
    auto [x, y] = detail::to_doubles(d, err);
    dx_ = x;
    dy_ = y;
    rho_ = fp::up(7.0 / 6.0 * detail::pow2d(-static_cast<long>(n)) * (1 + 0x1p-50) + err);
    stack_.push_back({{x, y, detail::pow2_above(rho_)}, {}, 0, 0, false});
  }
  const char* name() const override { return "ext"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    if (dead_) {
      steps_ += budget;
      return false;
    }
    const auto& ev = P_->evaluator();
    const double R = P_->escape_R();
    std::uint64_t stop = steps_ + budget;
    while (steps_ < stop) {
      if (stack_.empty()) {
        halt(0);
        return true;
      }
      Item& it = stack_.back();
      if (!it.started) {
        if (detail::square_dist_lo(it.sq, dx_, dy_) > rho_ ||
            detail::square_dist_lo(it.sq, 0, 0) > R) {
          stack_.pop_back();
          continue;
        }
        it.w = it.sq.disc();
        it.started = true;
      }
      it.w = ev.eval(it.w);
      ++it.iters;
      ++steps_;
      if (it.w.finite() && it.w.mag_lo() > R) {
        stack_.pop_back();
        continue;
      }
      for (const auto& D : P_->domains())
        if (it.w.finite() && it.w.inside_closed(D.x, D.y, D.r)) {
          // This square lies in a basin, so B(d, 7/6 2^-n) meets K.
          dead_ = true;
          steps_ = stop;
          return false;
        }
      if (!it.w.finite() || it.w.rad > R || it.iters >= 24 + 4 * it.depth) {
        Item parent = it;
        stack_.pop_back();
        double h = parent.sq.hw / 2;
        int dep = parent.depth + 1;
        const Square& s = parent.sq;
        stack_.push_back({{s.x + h, s.y - h, h}, {}, 0, dep, false});
        stack_.push_back({{s.x - h, s.y - h, h}, {}, 0, dep, false});
        stack_.push_back({{s.x + h, s.y + h, h}, {}, 0, dep, false});
        stack_.push_back({{s.x - h, s.y + h, h}, {}, 0, dep, false});
      }
    }
    return false;
  }

 private:
  struct Item {
    Square sq;
    FBall w;
    int iters;
    int depth;
    bool started;
  };
  const FilledProblem* P_;
  double dx_, dy_, rho_;
  std::vector<Item> stack_;
  bool dead_ = false;
};

// Julia machine: looks for a certified repelling periodic point within
// 11/6 2^-n of d. Periods up to the catalog cap come from the shared
// catalog (virtual cost: one step per catalog point); deeper periods are
// isolated locally in the square around d.
class JuliaMachine : public Machine {
 public:
  JuliaMachine(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n)
      : P_(&P), d_(d), n_(n) {
    double err;
    auto [x, y] = detail::to_doubles(d, err);
    dx_ = x;
    dy_ = y;
    tau_ = 11.0 / 6.0 * detail::pow2d(-static_cast<long>(n));
    tau_hi_ = fp::up(tau_ * (1 + 0x1p-50) + err);
    cap_ = P.catalog().max_period();
  }
  const char* name() const override { return "jul"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    std::uint64_t stop = steps_ + budget;
    while (steps_ < stop) {
      if (m_ <= cap_) {
        const auto& pts = P_->repelling_points(m_);
        steps_ += std::max<std::size_t>(1, pts.size() / 16);
        auto lo = std::lower_bound(pts.begin(), pts.end(), std::make_pair(dx_ - tau_hi_, -1e300));
        for (auto it = lo; it != pts.end() && it->first <= dx_ + tau_hi_; ++it)
          if (within(it->first, it->second)) {
            halt(1);
            return true;
          }
        ++m_;
        continue;
      }
      if (m_ > P_->config().local_period_cap) {
        steps_ = stop;  // nothing left to try
        return false;
      }
      if (!search_) {
        RootSearch::Options opt;
        opt.period = m_;
        opt.escape_R = P_->escape_R();
        opt.target = detail::pow2d(-static_cast<long>(n_) - 4);
        search_ = std::make_unique<RootSearch>(P_->evaluator(),
                                               Square{dx_, dy_, detail::pow2_above(tau_hi_)}, opt);
        seen_ = 0;
      }
      std::uint64_t before = search_->steps();
      search_->advance(stop - steps_);
      steps_ += std::max<std::uint64_t>(1, search_->steps() - before);
      const auto& roots = search_->roots();
      for (; seen_ < roots.size(); ++seen_) {
        const auto& r = roots[seen_];
        if (r.multiplier.mag_lo() > 1 && within(r.enclosure.re, r.enclosure.im)) {
          halt(1);
          return true;
        }
      }
      if (search_->done()) {
        search_.reset();
        ++m_;
      }
    }
    return false;
  }

 private:
  bool within(double x, double y) const {
    double ddx = x - dx_, ddy = y - dy_;
    if (ddx * ddx + ddy * ddy > tau_hi_ * tau_hi_ * 1.01) return false;
    // exact: 36 |e - d|^2 < 121 4^-n
    Dyadic e2 = dist2(point2(Dyadic::from_double(x), Dyadic::from_double(y)), d_);
    return e2 * Dyadic(36) < Dyadic(121).mul_pow2(-2 * static_cast<long>(n_));
  }

  const FilledProblem* P_;
  DyadicPoint d_;
  std::uint64_t n_;
  double dx_, dy_, tau_, tau_hi_;
  int cap_;
  int m_ = 1;
  std::unique_ptr<RootSearch> search_;
  std::size_t seen_ = 0;
};

namespace detail {

// Certified enclosures of the orbit of a point (or a small disc around a
// point), switching to MPFR balls when double enclosures become too wide.
class OrbitTracker {
 public:
  OrbitTracker(const PolyEnclosure& p, const Evaluator<FBall>& ev, double R, const DyadicPoint& d,
               const Dyadic& r0 = Dyadic())
      : p_(&p), ev_(&ev), R_(R), d_(d), r0_(r0) {
    w_ = FBall::from_dyadic(d[0], d[1], r0);
  }

  // Advances one iterate. Returns false once the orbit provably escapes.
  bool step() {
    ++k_;
    if (prec_ == 0) {
      w_ = ev_->eval(w_);
      if (w_.finite() && w_.mag_lo() > R_) return false;
      if (!w_.finite() || w_.rad > 0x1p-12) upgrade(128);
      return true;
    }
    if (stuck_) return true;
    mw_ = mev_->eval(mw_);
    if (mw_.mag_lo() > R_) return false;
    if (!mw_.finite() || mw_.rad_hi() > 0x1p-12) upgrade(prec_ * 2);
    return true;
  }

  int k() const { return k_; }
  // Work of the last step in double-evaluation units.
  std::uint64_t cost() const {
    if (stuck_) return 1000;
    return prec_ == 0 ? 1 : mp_cost(prec_);
  }
  // Current enclosure as a double disc (outward rounded).
  FBall disc() const {
    if (prec_ == 0) return w_;
    if (!mw_.finite()) return {0, 0, std::numeric_limits<double>::infinity()};
    return mw_.to_fball();
  }

 private:
  void upgrade(std::uint64_t prec) {
    // An inexact start disc cannot be sharpened by precision alone.
    if (r0_.sign() != 0) return;
    if (prec > max_precision_bits()) {
      if (prec_ != 0) stuck_ = true;
      return;
    }
    prec_ = static_cast<mpfr_prec_t>(prec);
    mev_ = std::make_unique<Evaluator<MBall>>(*p_, prec_);
    mw_ = MBall::from_dyadic(d_[0], d_[1], 0, prec_);
    for (int i = 0; i < k_; ++i) mw_ = mev_->eval(mw_);
    replay_ += static_cast<std::uint64_t>(k_) * mp_cost(prec_);
  }

  // Multiplication cost grows roughly quadratically with the limb count.
  static std::uint64_t mp_cost(mpfr_prec_t prec) {
    std::uint64_t l = static_cast<std::uint64_t>(prec) / 64;
    return 1 + l * l / 64;
  }

 public:
  // Work spent replaying the orbit after precision increases; taken once.
  std::uint64_t take_replay() {
    std::uint64_t r = replay_;
    replay_ = 0;
    return r;
  }

 private:
  std::uint64_t replay_ = 0;

  const PolyEnclosure* p_;
  const Evaluator<FBall>* ev_;
  double R_;
  DyadicPoint d_;
  Dyadic r0_;
  FBall w_;
  MBall mw_;
  mpfr_prec_t prec_ = 0;
  std::unique_ptr<Evaluator<MBall>> mev_;
  int k_ = 0;
  bool stuck_ = false;
};

// Exact test: B(z, mu) inside the sector.
inline bool ball_in_sector(const Dyadic& zx, const Dyadic& zy, const Dyadic& mu, const Sector& s) {
  Dyadic wx = zx - s.vertex[0], wy = zy - s.vertex[1];
  if (mu > s.radius) return false;
  Dyadic rr = s.radius - mu;
  if (wx * wx + wy * wy > rr * rr) return false;
  Dyadic c1 = s.dir1[0] * wy - s.dir1[1] * wx;  // dir1 x w
  Dyadic c2 = wx * s.dir2[1] - wy * s.dir2[0];  // w x dir2
  Dyadic n1 = s.dir1[0] * s.dir1[0] + s.dir1[1] * s.dir1[1];
  Dyadic n2 = s.dir2[0] * s.dir2[0] + s.dir2[1] * s.dir2[1];
  if (c1.sign() < 0 || c2.sign() < 0) return false;
  return c1 * c1 >= mu * mu * n1 && c2 * c2 >= mu * mu * n2;
}

}  // namespace detail

// Attracting-basin machine: halts with 1 once an enclosure of p^k(d), widened
// by 2^-k, lies inside a certified basin domain.
class HyperbolicMachine : public Machine {
 public:
  HyperbolicMachine(const FilledProblem& P, const DyadicPoint& d)
      : P_(&P), orbit_(P.poly(), P.evaluator(), P.escape_R(), d) {}
  const char* name() const override { return "hyp"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    std::uint64_t stop = steps_ + budget;
    if (P_->domains().empty() || escaped_) {
      steps_ = stop;
      return false;
    }
    while (steps_ < stop) {
      if (!orbit_.step()) {
        escaped_ = true;
        steps_ = stop;
        return false;
      }
      steps_ += orbit_.cost() + orbit_.take_replay();
      FBall w = orbit_.disc();
      double margin = std::ldexp(1.0, -std::min(orbit_.k(), 1000));
      FBall wm = inflate(w, margin);
      for (const auto& D : P_->domains())
        if (wm.inside_closed(D.x, D.y, D.r)) {
          halt(1);
          return true;
        }
    }
    return false;
  }

 private:
  const FilledProblem* P_;
  detail::OrbitTracker orbit_;
  bool escaped_ = false;
};

// Parabolic-basin machine: as above with attracting sectors.
class ParabolicMachine : public Machine {
 public:
  ParabolicMachine(const FilledProblem& P, const DyadicPoint& d)
      : P_(&P), orbit_(P.poly(), P.evaluator(), P.escape_R(), d) {}
  const char* name() const override { return "par"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    std::uint64_t stop = steps_ + budget;
    if (P_->sectors().empty() || escaped_) {
      steps_ = stop;
      return false;
    }
    while (steps_ < stop) {
      if (!orbit_.step()) {
        escaped_ = true;
        steps_ = stop;
        return false;
      }
      steps_ += orbit_.cost() + orbit_.take_replay();
      FBall w = orbit_.disc();
      double margin = std::ldexp(1.0, -std::min(orbit_.k(), 1000));
      Dyadic zx = Dyadic::from_double(w.re), zy = Dyadic::from_double(w.im);
      Dyadic mu = Dyadic::from_double(fp::up(w.rad + margin));
      for (const auto& s : P_->sectors())
        if (detail::ball_in_sector(zx, zy, mu, s)) {
          halt(1);
          return true;
        }
    }
    return false;
  }

 private:
  const FilledProblem* P_;
  detail::OrbitTracker orbit_;
  bool escaped_ = false;
};

// Siegel machine. Squares Q of pitch 2^-(n+5) cover B(d, 4/3 2^-n); each has
// a disc U of radius 2^-(n+2) about its center inside B(d, 5/3 2^-n). At
// iterate i the enclosure W of p^i(Q) is rasterized at pitch 2^-(n+4) only
// when a Krawczyk test shows that W widened by two cells lies in p^i(U). The
// marked set is thus inside the image of B(d, 5/3 2^-n) and contains the image
// of B(d, 4/3 2^-n) as far as certified. Halts with 1 when it covers the Siegel
// point or the companion, or separates the two.
class SiegelMachine : public Machine {
 public:
  SiegelMachine(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n) : P_(&P), n_(n) {
    if (P.siegel().empty()) return;
    double err;
    auto [x, y] = detail::to_doubles(d, err);
    const double s = detail::pow2d(-static_cast<long>(n) - 5);
    const double rin = 4.0 / 3.0 * detail::pow2d(-static_cast<long>(n)) + err;
    const double rout = 5.0 / 3.0 * detail::pow2d(-static_cast<long>(n)) - err;
    urad_ = detail::pow2d(-static_cast<long>(n) - 2);
    long k = static_cast<long>(std::ceil(rin / s)) + 1;
    double gx = std::floor(x / s) * s, gy = std::floor(y / s) * s;  // grid-aligned
    for (long j = -k; j <= k; ++j)
      for (long i = -k; i <= k; ++i) {
        Square q{gx + (i + 0.5) * s, gy + (j + 0.5) * s, s / 2};
        if (detail::square_dist_lo(q, x, y) > rin) continue;
        double cd = FBall::center_dist_hi(FBall::point(q.x, q.y), x, y);
        if (fp::up(cd + urad_) > rout) continue;  // U would leave B(d, 5/3 2^-n)
        Track t;
        t.ox = q.x;
        t.oy = q.y;
        t.q = q.disc();
        t.mid = FBall::point(q.x, q.y);
        t.dmid = FBall::point(1, 0);
        t.u = FBall{q.x, q.y, urad_};
        t.du = FBall::point(1, 0);
        tracks_.push_back(t);
      }
    double R = P.escape_R();
    raster_ = std::make_unique<Raster>(
        Raster::covering(static_cast<int>(n) + 4, -R, R, -R, R, 4));
  }
  const char* name() const override { return "sieg"; }

  bool run(std::uint64_t budget) override {
    if (halted_) return true;
    std::uint64_t stop = steps_ + budget;
    if (!raster_ || tracks_.empty()) {
      steps_ = stop;
      return false;
    }
    const auto& ev = P_->evaluator();
    const double h = raster_->pitch();
    while (steps_ < stop) {
      if (cursor_ == tracks_.size()) {
        // All squares processed for iterate i: test, then advance.
        steps_ += static_cast<std::uint64_t>(raster_->nx() * raster_->ny() / 64 + 1);
        if (check()) {
          halt(1);
          return true;
        }
        cursor_ = 0;
        ++iter_;
        if (live_ == 0) {
          steps_ = stop;
          return false;
        }
        live_ = 0;
        continue;
      }
      Track& t = tracks_[cursor_++];
      if (!t.alive) continue;
      ++steps_;
      if (iter_ > 0) {
        t.dmid = ev.deriv(t.mid) * t.dmid;
        t.mid = ev.eval(t.mid);
        t.du = ev.deriv(t.u) * t.du;
        t.u = ev.eval(t.u);
        t.q = ev.eval(t.q);
        if (!t.u.finite() || !t.q.finite() || t.u.rad > 4 * P_->escape_R()) {
          t.alive = false;
          continue;
        }
      }
      ++live_;
      FBall wplus = inflate(t.q, fp::up(2 * h));
      if (certify_inside_image(t, wplus)) raster_->mark_disc(t.q);
    }
    return false;
  }

 private:
  struct Track {
    FBall q;     // p^i(Q)
    FBall mid;   // p^i(center)
    FBall dmid;  // (p^i)'(center)
    FBall u;     // p^i(U)
    FBall du;    // (p^i)'(U)
    double ox = 0, oy = 0;  // center of Q and U
    bool alive = true;
  };

  // Every w in `target` has a preimage in U under p^i: Krawczyk for
  // z -> p^i(z) - w with w ranging over the target disc.
  bool certify_inside_image(const Track& t, const FBall& target) const {
    if (iter_ == 0) {
      FBall c = FBall::point(t.mid.re, t.mid.im);
      return target.inside_open(c.re, c.im, urad_);
    }
    std::complex<double> dm = t.dmid.mid();
    if (dm == 0.0 || !std::isfinite(std::abs(dm))) return false;
    FBall Y = FBall::point(1.0 / dm);
    FBall center = FBall::point(t.ox, t.oy);
    FBall g = t.mid - target;
    FBall one_minus = FBall::point(1, 0) - Y * t.du;
    FBall K = center - Y * g + FBall{0, 0, fp::up(one_minus.mag_hi() * urad_)};
    return K.finite() && K.inside_open(t.ox, t.oy, urad_);
  }

  bool check() const {
    for (const auto& st : P_->siegel()) {
      auto cc = raster_->cells_meeting(st.center);
      auto yc = raster_->cells_meeting(st.companion);
      if (raster_->all_marked(cc) || raster_->all_marked(yc)) return true;
      if (raster_->separated(cc, yc)) return true;
    }
    return false;
  }

  const FilledProblem* P_;
  std::uint64_t n_;
  double urad_ = 0;
  std::vector<Track> tracks_;
  std::unique_ptr<Raster> raster_;
  std::size_t cursor_ = 0;
  int iter_ = 0;
  std::size_t live_ = 0;
};

// ---------------------------------------------------------------------------
// Single-machine entry points (fresh state).

inline SemiVerdict run_machine(std::shared_ptr<Machine> m, std::uint64_t budget) {
  m->run(budget);
  return {m->halted(), m->bit(), m->steps(), m};
}

inline SemiVerdict m_ext(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n,
                         std::uint64_t budget) {
  return run_machine(std::make_shared<ExteriorMachine>(P, d, n), budget);
}
inline SemiVerdict m_jul(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n,
                         std::uint64_t budget) {
  return run_machine(std::make_shared<JuliaMachine>(P, d, n), budget);
}
inline SemiVerdict m_hyp(const FilledProblem& P, const DyadicPoint& d, std::uint64_t budget) {
  return run_machine(std::make_shared<HyperbolicMachine>(P, d), budget);
}
inline SemiVerdict m_par(const FilledProblem& P, const DyadicPoint& d, std::uint64_t budget) {
  return run_machine(std::make_shared<ParabolicMachine>(P, d), budget);
}
inline SemiVerdict m_sieg(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n,
                          std::uint64_t budget) {
  return run_machine(std::make_shared<SiegelMachine>(P, d, n), budget);
}

// Resumes a pending verdict with more budget.
inline SemiVerdict resume(const SemiVerdict& v, std::uint64_t budget) {
  if (!v.state) return v;
  return run_machine(v.state, budget);
}

struct QueryAnswer {
  int bit = -1;
  std::string machine;     // which machine halted
  std::uint64_t steps = 0;  // total steps over all machines
};

// Answers 1 when dist(d, K) < 2^-n, 0 when dist(d, K) > 2 2^-n, and either
// in between, by round-robin over the five machines with doubling budgets.
inline QueryAnswer filled_query(const FilledProblem& P, const DyadicPoint& d, std::uint64_t n) {
  if (d.size() != 2) throw DomainError("query point must be planar");
  const FilledConfig& cfg = P.config();
  std::vector<std::unique_ptr<Machine>> ms;
  ms.push_back(std::make_unique<ExteriorMachine>(P, d, n));
  ms.push_back(std::make_unique<JuliaMachine>(P, d, n));
  if (!P.domains().empty()) ms.push_back(std::make_unique<HyperbolicMachine>(P, d));
  if (!P.sectors().empty()) ms.push_back(std::make_unique<ParabolicMachine>(P, d));
  if (!P.siegel().empty()) ms.push_back(std::make_unique<SiegelMachine>(P, d, n));
  // Machines with no certificate data never halt; they are skipped, which
  // changes no answer.
  std::uint64_t total = 0;
  for (std::uint64_t b = cfg.round_start;; b = std::min(b * 2, cfg.round_cap)) {
    for (auto& m : ms) {
      std::uint64_t before = m->steps();
      if (m->run(b)) {
        total += m->steps() - before;
        return {m->bit(), m->name(), total};
      }
      total += m->steps() - before;
      if (total >= cfg.global_cap)
        throw Inconclusive("no machine halted within " + std::to_string(cfg.global_cap) + " steps");
    }
  }
}

// Grid answers at pitch 2^-(n+2) over the escape disc, each a query at
// precision n+2.
inline GridResult filled_grid(const FilledProblem& P, std::uint64_t n) {
  const int g = static_cast<int>(n) + 2;
  const double h = std::ldexp(1.0, -g);
  const long k = static_cast<long>(std::ceil(P.escape_R() / h)) + 1;
  const double R = P.escape_R();
  return sweep_grid(
      g, -k, -k, 2 * k + 1, 2 * k + 1,
      [&](long i, long j) {
        double x = i * h, y = j * h;
        // Beyond R + pitch the answer 0 is forced: the point is far from K.
        if (std::sqrt(x * x + y * y) > R + 2 * h) return false;
        return filled_query(P, point2(Dyadic::from_parts(i, g), Dyadic::from_parts(j, g)),
                            n + 2)
                   .bit == 1;
      },
      P.config().threads);
}

// Cover C with d_H(C, K) <= 3/4 2^-n: balls of radius 2^-(n+2) on the
// grid points answering 1.
inline Cover filled_cover(const FilledProblem& P, std::uint64_t n) {
  return filled_grid(P, n).to_cover(static_cast<int>(n) + 2);
}

// ---------------------------------------------------------------------------
// Certificates for quadratics found automatically.

struct Autopilot {
  PolyEnclosure poly;
  OrbitCertificate cert;
  bool attracting_found = false;
  // A multiple periodic point was seen and no certificate covers it: the
  // parameter is probably parabolic and queries may not terminate.
  bool parabolic_suspect = false;
};

namespace detail {

// Largest r in {1/2, 1/4, ...} with p^m(B(z, r)) strictly inside B(z, r).
inline std::optional<Dyadic> self_mapped_radius(const Evaluator<FBall>& ev, int m, double x,
                                                double y) {
  for (int e = 1; e <= 40; ++e) {
    double r = std::ldexp(1.0, -e);
    FBall w{x, y, r};
    for (int j = 0; j < m && w.finite(); ++j) w = ev.eval(w);
    if (w.finite() && w.inside_open(x, y, r)) return Dyadic::pow2(-e);
  }
  return std::nullopt;
}

}  // namespace detail

// Builds z^2 + c and a certificate for it: the first attracting cycle found
// (periods up to the catalog cap) with self-mapped discs around its points as
// both isolating balls and basin domains. A supplied certificate for
// parabolic cycles is merged in.
inline Autopilot quadratic_autopilot(const ComplexOracle& c,
                                     const std::optional<OrbitCertificate>& parabolic = {},
                                     IsolationOptions iso = {}) {
  Autopilot a{PolyEnclosure::quadratic(c), {}, false, false};
  PeriodicCatalog cat(a.poly, iso);
  for (int m = 1; m <= cat.max_period() && !a.attracting_found; ++m) {
    const PeriodBatch& b = cat.batch(m);
    if (!b.clusters.empty()) a.parabolic_suspect = true;
    for (std::size_t i = 0; i < b.roots.size(); ++i) {
      if (b.exact_period[i] != m || !(b.roots[i].multiplier.mag_hi() < 1)) continue;
      CertOrbit o;
      o.period = m;
      o.kind = OrbitKind::Attracting;
      std::size_t k = i;
      bool ok = true;
      for (int j = 0; j < m; ++j) {
        const FBall& e = b.roots[k].enclosure;
        Dyadic x = Dyadic::from_double(std::nearbyint(std::ldexp(e.re, 40))).mul_pow2(-40);
        Dyadic y = Dyadic::from_double(std::nearbyint(std::ldexp(e.im, 40))).mul_pow2(-40);
        auto r = detail::self_mapped_radius(cat.evaluator(), m, x.to_double(), y.to_double());
        if (!r) {
          ok = false;
          break;
        }
        Ball D{point2(x, y), *r};
        o.balls.push_back(D);
        o.domains.push_back(D);
        if (b.successor[k] < 0) {
          ok = false;
          break;
        }
        k = static_cast<std::size_t>(b.successor[k]);
      }
      if (!ok) continue;
      a.cert.orbits.push_back(std::move(o));
      a.attracting_found = true;
      break;
    }
  }
  if (a.attracting_found) a.parabolic_suspect = false;
  if (parabolic) {
    for (const auto& o : parabolic->orbits) a.cert.orbits.push_back(o);
    a.parabolic_suspect = false;
  }
  return a;
}

}  // namespace juliacert
