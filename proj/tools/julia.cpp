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

// julia: command-line front end.
//
// Exit codes: 0 success, 1 input error (bad arguments, files, certificates,
// parameters out of range), 2 inconclusive (budget exhausted, possibly
// parabolic parameter without certificate, numerical give-up), 3 internal.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "juliacert/juliacert.hpp"

namespace jc = juliacert;

namespace {

struct Common {
  std::string quad_c;
  std::string poly_file;
  std::string cert_file;
  std::string out;
  std::string format = "cover";
  std::uint64_t n = 0;
  unsigned threads = 0;
  std::uint64_t round_cap = 1000000;
  std::uint64_t global_cap = 1000000000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw jc::InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to the -o path, or stdout when empty.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw jc::InputError("cannot write '" + path + "'");
  write(os);
  if (!os) throw jc::InputError("write to '" + path + "' failed");
}

void write_cover_with_meta(std::ostream& os, const jc::Cover& c, const std::string& meta) {
  std::istringstream is(meta);
  for (std::string line; std::getline(is, line);) os << "# " << line << "\n";
  jc::write_cover(os, c);
}

struct Problem {
  jc::PolyEnclosure poly;
  std::string label;
  std::optional<jc::ComplexOracle> quad_c;  // set for z^2 + c
};

Problem load_problem(const Common& o, std::uint64_t prec, jc::ConversionLog& log) {
  if (o.quad_c.empty() == o.poly_file.empty())
    throw jc::InputError("give exactly one of --quad-c and --poly");
  Problem p;
  if (!o.quad_c.empty()) {
    auto v = jc::parse_numbers(o.quad_c, 2, prec, &log);
    p.quad_c = jc::ComplexOracle::exact(v[0], v[1]);
    p.poly = jc::PolyEnclosure::quadratic(*p.quad_c);
    p.label = "z^2 + (" + v[0].str() + ") + (" + v[1].str() + ")i";
    return p;
  }
  p.poly = jc::parse_poly_text(read_file(o.poly_file), prec, &log);
  p.label = "polynomial from " + o.poly_file;
  if (p.poly.is_unicritical_quadratic()) p.quad_c = p.poly.coeff(0);
  return p;
}

std::optional<jc::OrbitCertificate> load_cert(const Common& o, const jc::PolyEnclosure& p) {
  if (o.cert_file.empty()) return std::nullopt;
  jc::OrbitCertificate cert = jc::certificate_from_json(read_file(o.cert_file));
  std::string why = jc::validate_certificate(p, cert);
  if (!why.empty()) throw jc::CertificateInvalid(why);
  return cert;
}

// Builds the query context: autopilot for quadratics, else the given
// certificate (or none).
std::unique_ptr<jc::FilledProblem> build_filled(const Common& o, jc::ConversionLog& log,
                                                std::string& label) {
  Problem pr = load_problem(o, o.n + 8, log);
  label = pr.label;
  auto cert = load_cert(o, pr.poly);
  jc::FilledConfig cfg;
  cfg.threads = o.threads;
  cfg.round_cap = o.round_cap;
  cfg.global_cap = o.global_cap;
  if (pr.quad_c) {
    jc::Autopilot a = jc::quadratic_autopilot(*pr.quad_c, cert);
    if (a.parabolic_suspect)
      throw jc::Inconclusive(
          "parameter has a multiple periodic point (probably parabolic); supply --cert with "
          "attracting sectors");
    return std::make_unique<jc::FilledProblem>(pr.poly, a.cert, cfg);
  }
  if (!cert)
    std::cerr << "note: no certificate; queries near non-repelling cycles will not terminate\n";
  return std::make_unique<jc::FilledProblem>(pr.poly, cert.value_or(jc::OrbitCertificate{}), cfg);
}

void check_format(const std::string& f) {
  if (f != "cover" && f != "pgm") throw jc::InputError("format must be cover or pgm");
}

std::string grid_meta(const std::string& what, std::uint64_t n, int g, const jc::ConversionLog& log) {
  return what + "\nn = " + std::to_string(n) + "\npitch = 2^-" + std::to_string(g) + "\n" +
         log.comment_block();
}

void output_grid(const Common& o, const jc::GridResult& grid, const std::string& meta, int radius_exp) {
  if (o.format == "pgm") {
    emit(o.out, [&](std::ostream& os) { grid.write_pgm(os, meta); });
  } else {
    jc::Cover c = grid.to_cover(radius_exp);
    emit(o.out, [&](std::ostream& os) { write_cover_with_meta(os, c, meta); });
  }
}

int cmd_filled(const Common& o) {
  check_format(o.format);
  jc::ConversionLog log;
  std::string label;
  auto P = build_filled(o, log, label);
  jc::GridResult grid = jc::filled_grid(*P, o.n);
  output_grid(o, grid, grid_meta("filled Julia set of " + label, o.n, grid.g, log), grid.g);
  return 0;
}

int cmd_query(const Common& o, const std::string& point) {
  jc::ConversionLog log;
  std::string label;
  auto P = build_filled(o, log, label);
  auto d = jc::parse_numbers(point, 2, o.n + 8, &log);
  for (const auto& note : log.notes) std::cerr << "note: " << note << "\n";
  jc::QueryAnswer a = jc::filled_query(*P, jc::point2(d[0], d[1]), o.n);
  std::cout << a.bit << "\nmachine " << a.machine << " steps " << a.steps << "\n";
  return 0;
}

jc::FamilyConfig family_config(const Common& o, const std::string& slab) {
  jc::FamilyConfig cfg;
  cfg.threads = o.threads;
  cfg.round_cap = o.round_cap;
  cfg.global_cap = o.global_cap;
  if (!slab.empty()) cfg.slab = jc::parse_number(slab, 16);
  if (cfg.slab.sign() <= 0) throw jc::InputError("slab bound must be positive");
  return cfg;
}

int cmd_bbj_query(const Common& o, const std::string& point, const std::string& slab) {
  jc::ConversionLog log;
  auto v = jc::parse_numbers(point, 4, o.n + 8, &log);
  for (const auto& note : log.notes) std::cerr << "note: " << note << "\n";
  jc::FamilyPoint pt{jc::ComplexOracle::exact(v[0], v[1]), jc::ComplexOracle::exact(v[2], v[3])};
  jc::QueryAnswer a = jc::bbj_query(pt, o.n, family_config(o, slab));
  std::cout << a.bit << "\nmachine " << a.machine << " steps " << a.steps << "\n";
  return 0;
}

jc::Box parse_window(const std::string& w, std::uint64_t prec, jc::ConversionLog& log) {
  auto v = jc::parse_numbers(w, 4, prec, &log);
  if (v[1] < v[0] || v[3] < v[2]) throw jc::InputError("window must be 'x0 x1 y0 y1' with x0 <= x1, y0 <= y1");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_bbj_slice(const Common& o, const std::string& c, const std::string& window,
                  const std::string& slab) {
  check_format(o.format);
  jc::ConversionLog log;
  auto cv = jc::parse_numbers(c, 2, o.n + 8, &log);
  jc::Box win = parse_window(window, o.n + 8, log);
  jc::GridResult grid = jc::bbj_slice_grid(jc::ComplexOracle::exact(cv[0], cv[1]), o.n, win,
                                           family_config(o, slab));
  std::string meta = grid_meta("slice of the closure of {(z, c) : z in J_c} at c = " + cv[0].str() +
                                   " + (" + cv[1].str() + ")i",
                               o.n, grid.g, log) +
                     "window = " + win.re_lo.str() + " " + win.re_hi.str() + " " + win.im_lo.str() +
                     " " + win.im_hi.str() + "\n";
  output_grid(o, grid, meta, grid.g);
  return 0;
}

int cmd_omega(const Common& o, const std::optional<std::string>& t, bool filled, bool slice, long kmax) {
  check_format(o.format);
  if (static_cast<int>(t.has_value()) + static_cast<int>(filled) + static_cast<int>(slice) != 1)
    throw jc::InputError("give exactly one of --t, --filled, --closure-slice");
  jc::Cover c;
  std::string what;
  if (t) {
    jc::BitList bits = jc::BitList::parse(*t);
    c = jc::omega_cover(bits, o.n);
    what = "spoked circle, t = " + bits.str();
  } else if (filled) {
    c = jc::omega_filled_cover(o.n);
    what = "filled spoked circle (unit disk)";
  } else {
    if (kmax <= 0) throw jc::InputError("--closure-slice needs --kmax");
    c = jc::w_slice_cover(o.n, kmax);
    what = "circle with spokes k = 1.." + std::to_string(kmax);
  }
  std::string meta = what + "\nn = " + std::to_string(o.n) + "\n";
  if (o.format == "pgm") {
    int g = static_cast<int>(o.n) + 2;
    long k = (5L << g) / 4;
    jc::GridResult grid = jc::sweep_grid(
        g, -k, -k, 2 * k + 1, 2 * k + 1,
        [&](long i, long j) { return c.contains(jc::point2(jc::Dyadic::from_parts(i, g), jc::Dyadic::from_parts(j, g))); },
        o.threads);
    emit(o.out, [&](std::ostream& os) { grid.write_pgm(os, meta + "pitch = 2^-" + std::to_string(g)); });
  } else {
    emit(o.out, [&](std::ostream& os) { write_cover_with_meta(os, c, meta); });
  }
  return 0;
}

int cmd_orbits(const Common& o, const std::string& eps_text, int max_period, long count) {
  jc::ConversionLog log;
  Problem pr = load_problem(o, 64, log);
  jc::Dyadic eps = jc::parse_number(eps_text, 64, &log);
  if (eps.sign() <= 0) throw jc::InputError("--eps must be positive");
  for (const auto& note : log.notes) std::cout << "# " << note << "\n";
  auto stream = jc::enumerate_repelling(pr.poly, eps);
  long emitted = 0;
  for (;;) {
    auto item = stream.next();
    if (auto* cap = std::get_if<jc::PeriodCapMarker>(&item)) {
      std::cout << "# period cap " << cap->last_period << "\n";
      break;
    }
    const auto& e = std::get<jc::RepellingEmission>(item);
    if (max_period > 0 && e.period > max_period) break;
    std::cout << e.period << " " << e.point[0].str() << " " << e.point[1].str() << "\n";
    if (count > 0 && ++emitted >= count) break;
  }
  return 0;
}

int cmd_cert_validate(const Common& o) {
  if (o.cert_file.empty()) throw jc::InputError("--cert is required");
  jc::ConversionLog log;
  Problem pr = load_problem(o, 64, log);
  jc::OrbitCertificate cert = jc::certificate_from_json(read_file(o.cert_file));
  std::string why = jc::validate_certificate(pr.poly, cert);
  if (!why.empty()) throw jc::CertificateInvalid(why);
  std::cout << "valid: " << cert.orbits.size() << " cycle(s)\n";
  return 0;
}

void add_poly_options(CLI::App* s, Common& o) {
  s->add_option("--quad-c", o.quad_c, "parameter c of z^2 + c as 're im'");
  s->add_option("--poly", o.poly_file, "polynomial file (POLY d=... or QUAD c=...)");
}

void add_budget_options(CLI::App* s, Common& o) {
  s->add_option("--threads", o.threads, "worker threads (0: all cores)");
  s->add_option("--round-cap", o.round_cap, "per-machine budget cap per round")->check(CLI::PositiveNumber);
  s->add_option("--global-cap", o.global_cap, "total step budget per query")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified filled Julia sets and related sets"};
  app.require_subcommand(1);
  Common o;
  std::string point, slab, window = "-2 2 -2 2", c, eps = "1/2^10";
  std::optional<std::string> bits;
  bool filled = false, slice = false;
  long kmax = 0, count = 0;
  int max_period = 0;

  auto* f = app.add_subcommand("filled", "cover or raster of the filled Julia set");
  add_poly_options(f, o);
  f->add_option("-n", o.n, "precision: output within 2^-n in Hausdorff distance")->required();
  f->add_option("--cert", o.cert_file, "orbit certificate (JSON)");
  f->add_option("-o", o.out, "output path (default stdout)");
  f->add_option("--format", o.format, "cover or pgm");
  add_budget_options(f, o);

  auto* q = app.add_subcommand("query", "one membership query for the filled Julia set");
  add_poly_options(q, o);
  q->add_option("-n", o.n, "precision")->required();
  q->add_option("--point", point, "query point 'x y'")->required();
  q->add_option("--cert", o.cert_file, "orbit certificate (JSON)");
  add_budget_options(q, o);

  auto* bq = app.add_subcommand("bbj-query", "membership query for the closure of {(z, c) : z in J_c}");
  bq->add_option("-n", o.n, "precision")->required();
  bq->add_option("--point", point, "query point 'zx zy cx cy'")->required();
  bq->add_option("--slab", slab, "parameter bound |c| <= d (default 2)");
  add_budget_options(bq, o);

  auto* bs = app.add_subcommand("bbj-slice", "render the z-slice at a fixed parameter");
  bs->add_option("--c", c, "parameter 're im'")->required();
  bs->add_option("-n", o.n, "precision")->required();
  bs->add_option("--window", window, "'x0 x1 y0 y1' (default '-2 2 -2 2')");
  bs->add_option("--slab", slab, "parameter bound |c| <= d (default 2)");
  bs->add_option("-o", o.out, "output path (default stdout)");
  bs->add_option("--format", o.format, "cover or pgm");
  add_budget_options(bs, o);

  auto* om = app.add_subcommand("omega", "spoked-circle sets");
  om->add_option("--t", bits, "binary digits of t, e.g. 101 for (0.101)_2");
  om->add_flag("--filled", filled, "the filled set (unit disk)");
  om->add_flag("--closure-slice", slice, "circle with all spokes up to --kmax");
  om->add_option("--kmax", kmax, "largest spoke index for --closure-slice");
  om->add_option("-n", o.n, "precision")->required();
  om->add_option("-o", o.out, "output path (default stdout)");
  om->add_option("--format", o.format, "cover or pgm");
  om->add_option("--threads", o.threads, "worker threads for pgm output");

  auto* ob = app.add_subcommand("orbits", "list certified repelling periodic points");
  add_poly_options(ob, o);
  ob->add_option("--eps", eps, "location box width (default 1/2^10)");
  ob->add_option("--max-period", max_period, "stop after this period");
  ob->add_option("--count", count, "stop after this many points");

  auto* ce = app.add_subcommand("cert", "certificate tools");
  ce->require_subcommand(1);
  auto* cv = ce->add_subcommand("validate", "check a certificate against a polynomial");
  add_poly_options(cv, o);
  cv->add_option("--cert", o.cert_file, "orbit certificate (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*f) return cmd_filled(o);
    if (*q) return cmd_query(o, point);
    if (*bq) return cmd_bbj_query(o, point, slab);
    if (*bs) return cmd_bbj_slice(o, c, window, slab);
    if (*om) return cmd_omega(o, bits, filled, slice, kmax);
    if (*ob) return cmd_orbits(o, eps, max_period, count);
    if (*cv) return cmd_cert_validate(o);
  } catch (const jc::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const jc::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const jc::CertificateInvalid& e) {
    std::cerr << "error: invalid certificate: " << e.what() << "\n";
    return 1;
  } catch (const jc::Error& e) {
    // Inconclusive, WidthBlowup, PeriodCapExceeded, MultipleRootUnresolved.
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
