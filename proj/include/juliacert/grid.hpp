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

// Parallel sweeps of a predicate over dyadic grid points, with results
// stored in cell order so the output does not depend on scheduling.

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "juliacert/geometry.hpp"

namespace juliacert {

// Grid points (i 2^-g, j 2^-g) for i in [i0, i0 + nx), j in [j0, j0 + ny).
struct GridResult {
  int g = 0;
  long i0 = 0, j0 = 0, nx = 0, ny = 0;
  std::vector<std::uint8_t> bits;  // row-major, j ascending

  bool at(long i, long j) const {
    return bits[static_cast<std::size_t>((j - j0) * nx + (i - i0))] != 0;
  }
  DyadicPoint point(long i, long j) const {
    return point2(Dyadic::from_parts(i, g), Dyadic::from_parts(j, g));
  }

  // Balls of radius 2^-r around the grid points answering 1, in cell order.
  Cover to_cover(int r) const {
    Cover c;
    c.dim = 2;
    Dyadic rad = Dyadic::pow2(-r);
    for (long j = j0; j < j0 + ny; ++j)
      for (long i = i0; i < i0 + nx; ++i)
        if (at(i, j)) c.add({point(i, j), rad});
    return c;
  }

  // Binary PGM, top row = largest imaginary part.
  void write_pgm(std::ostream& os, const std::string& comment) const {
    os << "P5\n";
    std::string line;
    for (char ch : comment) {
      if (ch == '\n') {
        os << "# " << line << "\n";
        line.clear();
      } else {
        line += ch;
      }
    }
    if (!line.empty()) os << "# " << line << "\n";
    os << nx << " " << ny << "\n255\n";
    for (long j = j0 + ny - 1; j >= j0; --j)
      for (long i = i0; i < i0 + nx; ++i) os.put(at(i, j) ? static_cast<char>(255) : '\0');
  }
};

inline unsigned worker_count(unsigned requested) {
  if (requested) return requested;
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

// Evaluates f(i, j) on every grid point. Rows are handed out dynamically;
// exceptions are rethrown from the lowest failing row.
inline GridResult sweep_grid(int g, long i0, long j0, long nx, long ny,
                             const std::function<bool(long, long)>& f, unsigned threads = 0) {
  GridResult r{g, i0, j0, nx, ny, {}};
  r.bits.assign(static_cast<std::size_t>(nx * ny), 0);
  std::atomic<long> next{0};
  std::mutex mu;
  long bad_row = ny;
  std::exception_ptr err;
  auto work = [&] {
    for (;;) {
      long row = next.fetch_add(1);
      if (row >= ny) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (row > bad_row) return;
      }
      try {
        for (long k = 0; k < nx; ++k)
          r.bits[static_cast<std::size_t>(row * nx + k)] = f(i0 + k, j0 + row) ? 1 : 0;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (row < bad_row) {
          bad_row = row;
          err = std::current_exception();
        }
      }
    }
  };
  unsigned nt = std::min<unsigned>(worker_count(threads), static_cast<unsigned>(std::max(1L, ny)));
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return r;
}

}  // namespace juliacert
