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

// Text inputs: numbers, number tuples and polynomial files.
//
// Polynomial files:
//   POLY d=<degree>
//   <re> <im>          one line per coefficient, a_0 first
//   oracle:<id>        or a named oracle
// or the one-line shorthand "QUAD c=<re> <im>" for z^2 + c. Blank lines and
// lines starting with '#' are ignored.

#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "juliacert/dyadic.hpp"
#include "juliacert/oracle.hpp"
#include "juliacert/poly.hpp"

namespace juliacert {

// Records inexact conversions of decimal or rational inputs.
struct ConversionLog {
  std::vector<std::string> notes;

  std::string comment_block() const {
    std::string s;
    for (const auto& n : notes) s += n + "\n";
    return s;
  }
};

// Exact dyadics and integers are taken as is; other rationals (including
// decimals) are rounded to the grid 2^-prec and the rounding is logged.
inline Dyadic parse_number(std::string_view text, std::uint64_t prec, ConversionLog* log = nullptr) {
  mpq_class q = parse_rational(text);
  if (auto d = exact_dyadic(q)) return *d;
  Dyadic r = round_rational(q, prec);
  if (log)
    log->notes.push_back("input " + std::string(text) + " rounded to " + r.str() + " (2^-" +
                         std::to_string(prec) + " grid)");
  return r;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

inline std::vector<Dyadic> parse_numbers(std::string_view text, std::size_t count,
                                         std::uint64_t prec, ConversionLog* log = nullptr) {
  auto w = split_words(text);
  if (w.size() != count)
    throw InputError("expected " + std::to_string(count) + " numbers in '" + std::string(text) +
                     "'");
  std::vector<Dyadic> out;
  for (const auto& s : w) out.push_back(parse_number(s, prec, log));
  return out;
}

inline ComplexOracle parse_coefficient(std::string_view line, std::uint64_t prec,
                                       ConversionLog* log) {
  auto w = split_words(line);
  if (w.size() == 1 && w[0].rfind("oracle:", 0) == 0) {
    std::string id = w[0].substr(7);
    auto o = oracles::named(id);
    if (!o) throw InputError("unknown oracle '" + id + "'");
    return *o;
  }
  if (w.size() != 2) throw InputError("coefficient line needs 're im' or oracle:<id>: '" +
                                      std::string(line) + "'");
  return ComplexOracle::exact(parse_number(w[0], prec, log), parse_number(w[1], prec, log));
}

// Parses a polynomial file; `prec` is the grid for rounding inexact inputs.
inline PolyEnclosure parse_poly_text(std::string_view text, std::uint64_t prec,
                                     ConversionLog* log = nullptr) {
  std::istringstream is{std::string(text)};
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  if (lines.empty()) throw InputError("empty polynomial input");
  const std::string& head = lines[0];
  if (head.rfind("QUAD c=", 0) == 0) {
    if (lines.size() != 1) throw InputError("QUAD takes a single line");
    return PolyEnclosure::quadratic(parse_coefficient(head.substr(7), prec, log));
  }
  if (head.rfind("POLY d=", 0) != 0) throw InputError("polynomial input must start with POLY or QUAD");
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(head.substr(7), &used);
    if (used != head.size() - 7) throw InputError("bad degree");
  } catch (const std::exception&) {
    throw InputError("malformed degree in '" + head + "'");
  }
  if (d < 2 || d > 64) throw InputError("degree must be between 2 and 64");
  if (lines.size() != static_cast<std::size_t>(d) + 2)
    throw InputError("POLY d=" + std::to_string(d) + " needs " + std::to_string(d + 1) +
                     " coefficient lines");
  std::vector<ComplexOracle> cs;
  for (int i = 0; i <= d; ++i) cs.push_back(parse_coefficient(lines[static_cast<std::size_t>(i) + 1], prec, log));
  return PolyEnclosure(std::move(cs));
}

}  // namespace juliacert
