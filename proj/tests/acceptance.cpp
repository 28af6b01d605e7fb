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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Criteria 1-3 and 10 go through the julia binary.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "juliacert/juliacert.hpp"
#include "test_util.hpp"

using namespace juliacert;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Runs the CLI; returns the exit status and the wall time in seconds.
std::pair<int, double> julia(const std::string& args) {
  std::string cmd = std::string("'") + JULIA_CLI + "' " + args + " 2>acceptance_err.txt";
  auto t0 = std::chrono::steady_clock::now();
  int st = std::system(cmd.c_str());
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, dt};
}

Cover load(const std::string& path) {
  std::ifstream in(path);
  return read_cover(in);
}

// Upper bound for sup over the cover of the distance to a set, given the
// set's (1-Lipschitz) distance function: dist(center) + radius per ball.
double cover_excess(const Cover& C, const std::function<double(double, double)>& dist) {
  double h = 0;
  for (const auto& b : C.balls)
    h = std::max(h, dist(b.center[0].to_double(), b.center[1].to_double()) + b.radius.to_double());
  return h;
}

double sample_excess(const Cover& C, const std::vector<testutil::Pt>& pts) {
  testutil::CoverIndex idx(C);
  double h = 0;
  for (const auto& p : pts) h = std::max(h, idx.dist(p.x, p.y));
  return h;
}

const char* kDisk = "filled --quad-c \"0 0\" -n 6 -o acc_disk%d.cover";
const char* kSeg = "filled --quad-c \"-2 0\" -n 5 -o acc_seg%d.cover";
const char* kBasilica = "filled --quad-c \"-1 0\" -n 5 -o acc_basilica%d.cover";

std::string cmd(const char* f, int run) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, run);
  return buf;
}

Outcome disk_case() {
  auto [rc, t] = julia(cmd(kDisk, 1));
  if (rc != 0) return {false, "exit " + std::to_string(rc)};
  Cover C = load("acc_disk1.cover");
  // Closed unit disk: the sup of the distance over B(c, r) is max(0, |c| + r - 1).
  double h1 = 0;
  for (const auto& b : C.balls)
    h1 = std::max(h1, std::hypot(b.center[0].to_double(), b.center[1].to_double()) + b.radius.to_double() - 1);
  std::vector<testutil::Pt> pts;
  for (int k = 0; k < 2000; ++k) pts.push_back({std::cos(2 * M_PI * k / 2000), std::sin(2 * M_PI * k / 2000)});
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-1, 1);
  while (pts.size() < 10000) {
    double x = u(rng), y = u(rng);
    if (x * x + y * y <= 1) pts.push_back({x, y});
  }
  double h = std::max(h1, sample_excess(C, pts));
  return {h <= 0x1p-6 && t <= 60, fmt("d_H <= %.6f (limit %.6f), %.1f s (limit 60 s)", h, 0x1p-6, t)};
}

Outcome segment_case() {
  auto [rc, t] = julia(cmd(kSeg, 1));
  if (rc != 0) return {false, "exit " + std::to_string(rc)};
  Cover C = load("acc_seg1.cover");
  double h1 = cover_excess(C, [](double x, double y) { return std::hypot(std::max(0.0, std::abs(x) - 2), y); });
  std::vector<testutil::Pt> pts;
  for (int k = 0; k <= 10000; ++k) pts.push_back({-2 + 4.0 * k / 10000, 0});
  double h = std::max(h1, sample_excess(C, pts));
  return {h <= 0x1p-5 && t <= 120, fmt("d_H <= %.6f (limit %.6f), %.1f s (limit 120 s)", h, 0x1p-5, t)};
}

Outcome basilica_case() {
  auto [rc, t] = julia(cmd(kBasilica, 1));
  if (rc != 0) return {false, "exit " + std::to_string(rc)};
  Cover C = load("acc_basilica1.cover");
  // Escape-time raster: pitch 2^-9 over [-2, 2]^2, depth 1000.
  std::vector<testutil::Pt> R;
  const int g = 9, k = 2 << g;
  for (int j = -k; j <= k; ++j)
    for (int i = -k; i <= k; ++i) {
      cd z(std::ldexp(i, -g), std::ldexp(j, -g));
      if (testutil::bounded(z, -1, 1000)) R.push_back({z.real(), z.imag()});
    }
  testutil::PointIndex idx(R, 0x1p-6);
  double h1 = cover_excess(C, [&](double x, double y) { return idx.nearest(x, y); });
  double h = std::max(h1, sample_excess(C, R));
  const double tol = 0x1p-5 + 0x1p-8;
  return {h <= tol && t <= 300,
          fmt("d_H to raster <= %.6f (limit %.6f), %.1f s (limit 300 s)", h, tol, t) + ", " +
              std::to_string(R.size()) + " raster points"};
}

Outcome census() {
  RepellingStream s = enumerate_repelling(PolyEnclosure::quadratic(0, 0), Dyadic::pow2(-10));
  std::vector<std::vector<cd>> by_m(5);
  double worst = 0;
  for (;;) {
    auto it = s.next();
    if (std::holds_alternative<PeriodCapMarker>(it)) break;
    const auto& e = std::get<RepellingEmission>(it);
    if (e.period > 4) break;
    cd z(e.point[0].to_double(), e.point[1].to_double());
    worst = std::max(worst, std::abs(std::abs(z) - 1));
    auto& v = by_m[static_cast<std::size_t>(e.period)];
    if (std::none_of(v.begin(), v.end(), [&](cd w) { return std::abs(w - z) < 0x1p-8; })) v.push_back(z);
  }
  bool ok = worst <= 0x1p-9;
  std::string counts;
  for (int m = 1; m <= 4; ++m) {
    ok = ok && by_m[static_cast<std::size_t>(m)].size() == (1u << m) - 1;
    counts += (m > 1 ? "," : "") + std::to_string(by_m[static_cast<std::size_t>(m)].size());
  }
  return {ok, "distinct points for m = 1..4: " + counts + " (want 1,3,7,15); max ||z| - 1| = " + fmt("%.3g", worst)};
}

Outcome soundness() {
  struct Case {
    long c;
    double (*dist)(double, double);
  };
  const Case cases[] = {{0, [](double x, double y) { return std::max(0.0, std::hypot(x, y) - 1); }},
                        {-2, [](double x, double y) { return std::hypot(std::max(0.0, std::abs(x) - 2), y); }}};
  long violations = 0, queries = 0, errors = 0;
  for (const auto& cs : cases) {
    Autopilot a = quadratic_autopilot(ComplexOracle::exact(Dyadic(cs.c), Dyadic()));
    FilledProblem P(a.poly, a.cert);
    for (std::uint64_t n : {2u, 3u, 4u}) {
      double e = std::ldexp(1.0, -static_cast<int>(n));
      for (long j = -16; j <= 16; ++j)
        for (long i = -16; i <= 16; ++i) {
          DyadicPoint d = point2(Dyadic::from_parts(i, 3), Dyadic::from_parts(j, 3));
          ++queries;
          int b;
          try {
            b = filled_query(P, d, n).bit;
          } catch (const Error&) {
            ++errors;
            continue;
          }
          double dist = cs.dist(d[0].to_double(), d[1].to_double());
          if ((dist < e && b != 1) || (dist > 2 * e && b != 0)) ++violations;
        }
    }
  }
  return {violations == 0 && errors == 0, std::to_string(queries) + " queries, " + std::to_string(violations) +
                                              " violations, " + std::to_string(errors) + " inconclusive"};
}

Outcome parabolic() {
  OrbitCertificate cert = certificate_from_json(slurp(SAMPLES_DIR "/parabolic_quarter.json"));
  FilledProblem P(PolyEnclosure::quadratic(Dyadic::from_parts(1, 2), Dyadic()), cert);
  auto a = m_par(P, point2(0, 0), 1000000);
  auto b = m_ext(P, point2(3, 0), 1, 10000);
  bool ok = a.halted && a.bit == 1 && a.steps <= 1000000 && b.halted && b.bit == 0 && b.steps <= 10000;
  return {ok, "m_par(0): halted=" + std::to_string(a.halted) + " bit=" + std::to_string(a.bit) + " steps=" +
                  std::to_string(a.steps) + "; m_ext(3): halted=" + std::to_string(b.halted) +
                  " bit=" + std::to_string(b.bit) + " steps=" + std::to_string(b.steps)};
}

Outcome siegel() {
  ConversionLog log;
  PolyEnclosure p = parse_poly_text(slurp(SAMPLES_DIR "/golden_siegel.poly"), 64, &log);
  OrbitCertificate cert = certificate_from_json(slurp(SAMPLES_DIR "/golden_siegel.json"));
  FilledProblem P(p, cert);
  auto [ax, ay] = oracles::golden_siegel_alpha().query(10);
  // The fixed point with multiplier mu satisfies 2 alpha = mu.
  cd alpha = std::polar(0.5, 2 * M_PI * (std::sqrt(5.0) - 1) / 2);
  double off = std::abs(cd(ax.to_double(), ay.to_double()) - alpha);
  auto v = m_sieg(P, point2(ax, ay), 3, 10000000);
  bool ok = off <= 0x1p-8 && v.halted && v.bit == 1;
  return {ok, fmt("|d - alpha| = %.3g, ", off) + "halted=" + std::to_string(v.halted) +
                  " bit=" + std::to_string(v.bit) + " steps=" + std::to_string(v.steps)};
}

std::vector<FamilyEmission> near_cells(const A1Enumerator& A, int m, cd c) {
  std::vector<FamilyEmission> out;
  long i0 = A.cell_index(c.real()), j0 = A.cell_index(c.imag());
  for (long j = j0 - 1; j <= j0 + 1; ++j)
    for (long i = i0 - 1; i <= i0 + 1; ++i) {
      if (!A.cell_in_slab(i, j)) continue;
      auto e = A.cell(m, i, j);
      out.insert(out.end(), e.begin(), e.end());
    }
  return out;
}

Outcome family() {
  auto fam = [](long zx, long cx) {
    return FamilyPoint{ComplexOracle::exact(Dyadic(zx), Dyadic()), ComplexOracle::exact(Dyadic(cx), Dyadic())};
  };
  const std::uint64_t n = 4;
  struct Q {
    long zx, cx;
    int want;
  };
  std::string detail;
  bool ok = true;
  for (const Q& q : {Q{1, 0, 1}, Q{2, -2, 1}, Q{4, 0, 0}, Q{0, 0, 0}}) {
    int got = -1;
    try {
      got = bbj_query(fam(q.zx, q.cx), n).bit;
    } catch (const Error&) {
    }
    ok = ok && got == q.want;
    detail += "((" + std::to_string(q.zx) + ",0),(" + std::to_string(q.cx) + ",0))->" + std::to_string(got) + " ";
  }
  A1Enumerator A(n);
  int near_ok = 0;
  auto lib = testutil::rep_library();
  for (const auto& r : lib) {
    double best = INFINITY;
    for (const auto& e : near_cells(A, r.m, r.c))
      best = std::min(best, std::hypot(std::hypot(e.zx - r.z.real(), e.zy - r.z.imag()),
                                       std::hypot(e.cx - r.c.real(), e.cy - r.c.imag())));
    auto nr = testutil::newton_periodic(r.z, r.c, r.m);
    if (nr && nr->second > 1 && best <= std::ldexp(1.0, -static_cast<int>(n) - 2)) ++near_ok;
  }
  int emitted = 0, emitted_ok = 0;
  for (cd c : {cd(0), cd(-2), cd(-1, 0.5)})
    for (int m = 1; m <= 3; ++m)
      for (const auto& e : near_cells(A, m, c)) {
        ++emitted;
        auto nr = testutil::newton_periodic(cd(e.zx, e.zy), cd(e.cx, e.cy), m);
        if (nr && std::abs(nr->first - cd(e.zx, e.zy)) <= std::ldexp(1.0, -static_cast<int>(n) - 1) &&
            nr->second > 1 - 1e-3)
          ++emitted_ok;
      }
  ok = ok && near_ok == static_cast<int>(lib.size()) && lib.size() == 20 && emitted_ok == emitted && emitted > 0;
  return {ok, detail + "; sandwich: " + std::to_string(near_ok) + "/" + std::to_string(lib.size()) +
                  " library points near an emission, " + std::to_string(emitted_ok) + "/" +
                  std::to_string(emitted) + " emissions near a repelling point"};
}

Outcome omega() {
  double a = testutil::dh_bound(omega_cover(BitList::parse("101"), 7), {1, 3}, false);
  double b = testutil::dh_bound(omega_filled_cover(5), {}, true);
  std::mt19937 rng(7);
  std::bernoulli_distribution coin(0.5);
  Cover W = w_slice_cover(3, 16);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<bool> bits(16);
    for (auto&& x : bits) x = coin(rng);
    for (const auto& ball : omega_cover(BitList(bits), 3).balls)
      worst = std::max(worst, testutil::dist_to_cover(W, ball.center[0].to_double(), ball.center[1].to_double()) +
                                  ball.radius.to_double());
  }
  bool ok = a <= 0x1p-7 && b <= 0x1p-5 && worst <= 0x1p-2;
  return {ok, fmt("omega(0.101, 7): %.6f (limit %.6f); filled(5): %.6f", a, 0x1p-7, b) +
                  fmt(" (limit %.6f); slice excess %.6f (limit 0.25)", 0x1p-5, worst)};
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (auto [f, name] : {std::pair{kDisk, "acc_disk"}, {kSeg, "acc_seg"}, {kBasilica, "acc_basilica"}}) {
    if (julia(cmd(f, 2)).first != 0) return {false, std::string(name) + ": second run failed"};
    std::string a = slurp(std::string(name) + "1.cover"), b = slurp(std::string(name) + "2.cover");
    bool same = !a.empty() && a == b;
    ok = ok && same;
    detail += std::string(name) + (same ? " identical " : " DIFFERENT ");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"disk case", disk_case},
      {"segment case", segment_case},
      {"basilica cross-check", basilica_case},
      {"repelling census", census},
      {"machine soundness", soundness},
      {"parabolic basin", parabolic},
      {"siegel smoke test", siegel},
      {"family queries and sandwich", family},
      {"spoked circle geometry", omega},
      {"determinism", determinism},
  };
  int failed = 0, id = 0;
  for (const auto& [name, run] : criteria) {
    ++id;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS " : "FAIL ") << id << " " << name << ": " << o.detail << fmt(" [%.1f s]", dt)
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
