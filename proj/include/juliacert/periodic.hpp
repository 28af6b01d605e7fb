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

// Periodic points: isolation per period, multiplier classification, the
// shared per-polynomial catalog, and the stream of repelling points.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "juliacert/geometry.hpp"
#include "juliacert/poly.hpp"
#include "juliacert/roots.hpp"

namespace juliacert {

enum class MultiplierClass { Repelling, Attracting, Indifferent, Unknown };

inline const char* to_string(MultiplierClass c) {
  switch (c) {
    case MultiplierClass::Repelling: return "repelling";
    case MultiplierClass::Attracting: return "attracting";
    case MultiplierClass::Indifferent: return "indifferent?";
    case MultiplierClass::Unknown: return "unknown";
  }
  return "unknown";
}

// Repelling iff |lambda| > 1 over the whole box, Attracting iff < 1; a box
// meeting the unit circle with width < 2^-4 is tagged Indifferent?.
inline MultiplierClass classify_multiplier(const Box& lambda) {
  if (lambda.mod2_lo() > Dyadic(1)) return MultiplierClass::Repelling;
  if (lambda.mod2_hi() < Dyadic(1)) return MultiplierClass::Attracting;
  if (lambda.width() < Dyadic::pow2(-4)) return MultiplierClass::Indifferent;
  return MultiplierClass::Unknown;
}

struct PeriodicPointRecord {
  int period = 1;        // the m of p^m(z) = z that produced the record
  int exact_period = 0;  // least period when certified, else 0
  Box location;
  Box multiplier;
  MultiplierClass cls = MultiplierClass::Unknown;
  bool certified = false;  // false: an unresolved cluster (possibly several roots)

  DyadicPoint center() const { return point2(location.center_re(), location.center_im()); }
};

struct IsolationOptions {
  std::size_t max_roots = 256;  // period cap: deg^m must not exceed this
};

struct PeriodBatch {
  int period = 1;
  std::vector<CertifiedRoot> roots;  // sorted by (re, im) of the enclosure center
  std::vector<int> exact_period;     // per root, 0 when undetermined
  std::vector<int> successor;        // index of the root containing p(root), -1 unknown
  std::vector<std::vector<Square>> clusters;
  std::vector<FBall> cluster_multiplier;
  bool complete = false;  // certified count equals deg^m
  std::uint64_t cost = 0;  // evaluation steps spent building the batch
};

namespace detail {

inline double disc_hi(const FBall& b) { return b.rad; }

inline PeriodBatch build_batch(const PolyEnclosure& p, const Evaluator<FBall>& ev, int m,
                               double R) {
  PeriodBatch b;
  b.period = m;
  // Start square: smallest power-of-two half width covering the escape disc.
  double hw = 1;
  while (hw < R) hw *= 2;
  RootSearch::Options opt;
  opt.period = m;
  opt.escape_R = R;
  opt.target = 0x1p-40;
  RootSearch search(ev, {0, 0, hw}, opt);
  search.run();
  b.cost = search.steps();
  b.roots = dedupe_roots(search.roots());
  std::sort(b.roots.begin(), b.roots.end(), [](const CertifiedRoot& x, const CertifiedRoot& y) {
    return x.enclosure.re < y.enclosure.re ||
           (x.enclosure.re == y.enclosure.re && x.enclosure.im < y.enclosure.im);
  });
  double expected = std::pow(static_cast<double>(p.degree()), m);
  b.complete = static_cast<double>(b.roots.size()) == expected && search.unresolved().empty();
  b.clusters = cluster_squares(search.unresolved());
  for (const auto& cl : b.clusters) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : cl) {
      x0 = std::min(x0, s.x - s.hw);
      x1 = std::max(x1, s.x + s.hw);
      y0 = std::min(y0, s.y - s.hw);
      y1 = std::max(y1, s.y + s.hw);
    }
    FBall disc = FBall::from_box({Dyadic::from_double(x0), Dyadic::from_double(x1),
                                  Dyadic::from_double(y0), Dyadic::from_double(y1)});
    FBall w, dw;
    iterate_deriv(ev, disc, m, std::numeric_limits<double>::infinity(), w, dw);
    b.cluster_multiplier.push_back(dw);
  }
  // Successor map: p(E_i) inside U_j means p(root_i) = root_j.
  const std::size_t N = b.roots.size();
  b.successor.assign(N, -1);
  for (std::size_t i = 0; i < N; ++i) {
    FBall img = ev.eval(b.roots[i].enclosure);
    for (std::size_t j = 0; j < N; ++j) {
      const FBall& U = b.roots[j].uniqueness;
      if (img.inside_closed(U.re, U.im, U.rad)) {
        b.successor[i] = static_cast<int>(j);
        break;
      }
    }
  }
  b.exact_period.assign(N, 0);
  for (std::size_t i = 0; i < N; ++i) {
    int j = static_cast<int>(i);
    for (int k = 1; k <= m; ++k) {
      j = b.successor[static_cast<std::size_t>(j)];
      if (j < 0) break;
      if (j == static_cast<int>(i)) {
        b.exact_period[i] = k;
        break;
      }
    }
  }
  return b;
}

}  // namespace detail

// Shared, memoized per-period isolation results for one polynomial.
class PeriodicCatalog {
 public:
  explicit PeriodicCatalog(PolyEnclosure p, IsolationOptions opt = {})
      : p_(std::move(p)), ev_(p_), opt_(opt) {
    R_ = escape_radius(p_).to_double();
  }

  const PolyEnclosure& poly() const { return p_; }
  const Evaluator<FBall>& evaluator() const { return ev_; }
  double escape_R() const { return R_; }

  // Largest period whose root count fits the cap.
  int max_period() const {
    int m = 0;
    double n = 1;
    while (n * p_.degree() <= static_cast<double>(opt_.max_roots)) {
      n *= p_.degree();
      ++m;
    }
    return m;
  }

  const PeriodBatch& batch(int m) const {
    if (m < 1) throw DomainError("period must be positive");
    if (m > max_period())
      throw PeriodCapExceeded("period " + std::to_string(m) + " exceeds the root-count cap");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = batches_.find(m);
    if (it == batches_.end())
      it = batches_.emplace(m, std::make_unique<PeriodBatch>(detail::build_batch(p_, ev_, m, R_)))
               .first;
    return *it->second;
  }

 private:
  PolyEnclosure p_;
  Evaluator<FBall> ev_;
  IsolationOptions opt_;
  double R_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<PeriodBatch>> batches_;
};

namespace detail {

inline PeriodicPointRecord make_record(int m, int exact, const FBall& E, const FBall& mult) {
  PeriodicPointRecord r;
  r.period = m;
  r.exact_period = exact;
  r.location = E.to_box();
  r.multiplier = mult.to_box();
  r.cls = classify_multiplier(r.multiplier);
  r.certified = true;
  return r;
}

// Tightens an enclosure with MPFR balls until its radius is at most eps.
inline FBall refine_high(const PolyEnclosure& p, int m, const FBall& E0, double eps,
                         Box& out, Box& mult) {
  // Newton-Krawczyk in MPFR arithmetic, starting from the double enclosure.
  mpfr_prec_t prec = 128;
  Box cur = E0.to_box();
  for (int round = 0; round < 12; ++round) {
    Evaluator<MBall> ev(p, prec);
    for (int it = 0; it < 40; ++it) {
      MBall U = MBall::from_box(cur, prec);
      Dyadic cx = cur.center_re(), cy = cur.center_im();
      MBall mid = MBall::from_dyadic(cx, cy, 0, prec);
      MBall wm = mid, dwm = MBall::from_dyadic(1, 0, 0, prec);
      MBall wu = U, dwu = MBall::from_dyadic(1, 0, 0, prec);
      for (int j = 0; j < m; ++j) {
        dwm = ev.deriv(wm) * dwm;
        wm = ev.eval(wm);
        dwu = ev.deriv(wu) * dwu;
        wu = ev.eval(wu);
      }
      MBall gm = wm - mid;
      MBall gpu = dwu - MBall::from_dyadic(1, 0, 0, prec);
      std::complex<double> gp(dwm.re_approx() - 1, dwm.im_approx());
      std::complex<double> y = 1.0 / gp;
      MBall Y = MBall::from_dyadic(Dyadic::from_double(y.real()), Dyadic::from_double(y.imag()), 0,
                                   prec);
      MBall t = MBall::from_dyadic(1, 0, 0, prec) - Y * gpu;
      Dyadic ur = (cur.re_hi - cur.re_lo).mul_pow2(-1) + (cur.im_hi - cur.im_lo).mul_pow2(-1);
      MBall K = (mid - Y * gm).with_extra_radius(t.mag_hi() * ur.to_double() * (1 + 0x1p-40));
      Box kb = K.to_box();
      if (!(kb.width() < cur.width())) break;
      cur = kb;
      if (cur.width().to_double() <= eps) break;
    }
    if (cur.width().to_double() <= eps) {
      MBall U = MBall::from_box(cur, prec);
      MBall dw = MBall::from_dyadic(1, 0, 0, prec), w = U;
      for (int j = 0; j < m; ++j) {
        dw = ev.deriv(w) * dw;
        w = ev.eval(w);
      }
      out = cur;
      mult = dw.to_box();
      return E0;
    }
    prec *= 2;
    if (static_cast<std::uint64_t>(prec) > max_precision_bits()) break;
  }
  throw WidthBlowup("cannot refine periodic point to the requested width");
}

}  // namespace detail

// All roots of p^m(z) = z with location boxes of width <= eps. Unresolved
// clusters appear as records with certified == false and class Unknown.
inline std::vector<PeriodicPointRecord> isolate_periodic(const PeriodicCatalog& cat, int m,
                                                         const Dyadic& eps) {
  const PeriodBatch& b = cat.batch(m);
  std::vector<PeriodicPointRecord> out;
  double e = eps.to_double();
  for (std::size_t i = 0; i < b.roots.size(); ++i) {
    const auto& r = b.roots[i];
    PeriodicPointRecord rec = detail::make_record(m, b.exact_period[i], r.enclosure, r.multiplier);
    if (rec.location.width() > eps) {
      Box loc, mult;
      detail::refine_high(cat.poly(), m, r.enclosure, e, loc, mult);
      rec.location = loc;
      rec.multiplier = mult;
      rec.cls = classify_multiplier(mult);
    }
    out.push_back(rec);
  }
  for (std::size_t c = 0; c < b.clusters.size(); ++c) {
    const auto& cl = b.clusters[c];
    Box bb = cl.front().box();
    for (const auto& s : cl) {
      Box sb = s.box();
      bb.re_lo = min(bb.re_lo, sb.re_lo);
      bb.re_hi = max(bb.re_hi, sb.re_hi);
      bb.im_lo = min(bb.im_lo, sb.im_lo);
      bb.im_hi = max(bb.im_hi, sb.im_hi);
    }
    PeriodicPointRecord rec;
    rec.period = m;
    rec.location = bb;
    rec.multiplier = b.cluster_multiplier[c].to_box();
    rec.cls = MultiplierClass::Unknown;
    out.push_back(rec);
  }
  return out;
}

inline std::vector<PeriodicPointRecord> isolate_periodic(const PolyEnclosure& p, int m,
                                                         const Dyadic& eps) {
  PeriodicCatalog cat(p);
  return isolate_periodic(cat, m, eps);
}

// Strict form: throws MultipleRootUnresolved when the batch is incomplete.
inline std::vector<PeriodicPointRecord> isolate_periodic_strict(const PeriodicCatalog& cat, int m,
                                                                const Dyadic& eps) {
  if (!cat.batch(m).complete)
    throw MultipleRootUnresolved("roots of p^" + std::to_string(m) +
                                 "(z) = z could not all be separated");
  return isolate_periodic(cat, m, eps);
}

struct RepellingEmission {
  int period;
  DyadicPoint point;  // center of a certified location box of width <= eps
};
struct PeriodCapMarker {
  int last_period;
};
using RepellingItem = std::variant<RepellingEmission, PeriodCapMarker>;

// Streams certified repelling periodic points by increasing period m; for
// each m, every repelling root of p^m(z) = z once, ordered by (re, im). The
// stream ends with a PeriodCapMarker.
class RepellingStream {
 public:
  RepellingStream(std::shared_ptr<const PeriodicCatalog> cat, Dyadic eps)
      : cat_(std::move(cat)), eps_(std::move(eps)) {}

  RepellingItem next() {
    while (true) {
      if (m_ > cat_->max_period()) return PeriodCapMarker{cat_->max_period()};
      if (!loaded_) {
        batch_ = isolate_periodic(*cat_, m_, eps_);
        idx_ = 0;
        loaded_ = true;
      }
      while (idx_ < batch_.size()) {
        const auto& r = batch_[idx_++];
        if (r.certified && r.cls == MultiplierClass::Repelling) return RepellingEmission{m_, r.center()};
      }
      ++m_;
      loaded_ = false;
    }
  }

 private:
  std::shared_ptr<const PeriodicCatalog> cat_;
  Dyadic eps_;
  int m_ = 1;
  bool loaded_ = false;
  std::size_t idx_ = 0;
  std::vector<PeriodicPointRecord> batch_;
};

inline RepellingStream enumerate_repelling(const PolyEnclosure& p, const Dyadic& eps,
                                           IsolationOptions opt = {}) {
  return RepellingStream(std::make_shared<PeriodicCatalog>(p, opt), eps);
}

}  // namespace juliacert
