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

// End-to-end runs of the julia binary.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "juliacert/geometry.hpp"

namespace {

struct Result {
  int rc;
  std::string out, err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Result julia(const std::string& args) {
  std::string cmd = std::string("'") + JULIA_CLI + "' " + args + " >cli_out.txt 2>cli_err.txt";
  int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp("cli_out.txt"), slurp("cli_err.txt")};
}

const std::string kSamples = SAMPLES_DIR;

}  // namespace

TEST(Cli, FilledExamples) {
  Result a = julia("filled --quad-c \"0 0\" -n 4 --format pgm -o disk.pgm");
  ASSERT_EQ(a.rc, 0) << a.err;
  std::string pgm = slurp("disk.pgm");
  EXPECT_EQ(pgm.rfind("P5", 0), 0u);
  EXPECT_NE(pgm.find("# n = 4"), std::string::npos);

  Result b = julia("filled --quad-c \"-2 0\" -n 4 -o seg.cover");
  ASSERT_EQ(b.rc, 0) << b.err;
  std::ifstream in("seg.cover");
  juliacert::Cover c = juliacert::read_cover(in);
  ASSERT_FALSE(c.balls.empty());
  for (const auto& ball : c.balls) {
    EXPECT_LE(std::abs(ball.center[1].to_double()) + ball.radius.to_double(), 0x1p-4);
    EXPECT_LE(std::abs(ball.center[0].to_double()), 2 + 0x1p-4);
  }

  Result p = julia("filled --quad-c \"1/4 0\" -n 3");
  EXPECT_EQ(p.rc, 2);
  EXPECT_NE(p.err.find("inconclusive"), std::string::npos);
}

TEST(Cli, FilledWithCertificate) {
  Result a = julia("filled --poly " + kSamples + "/parabolic_quarter.poly --cert " + kSamples +
                   "/parabolic_quarter.json -n 2 -o para.cover");
  EXPECT_EQ(a.rc, 0) << a.err;
  // Certificate for a different polynomial.
  Result b = julia("filled --quad-c \"0 0\" --cert " + kSamples + "/parabolic_quarter.json -n 2");
  EXPECT_EQ(b.rc, 1);
}

TEST(Cli, Query) {
  Result a = julia("query --quad-c \"0 0\" -n 1 --point \"3 0\"");
  ASSERT_EQ(a.rc, 0) << a.err;
  EXPECT_EQ(a.out.substr(0, 2), "0\n");
  EXPECT_NE(a.out.find("machine ext"), std::string::npos);

  Result b = julia("query --quad-c \"0 0\" -n 1 --point \"0 0\"");
  ASSERT_EQ(b.rc, 0) << b.err;
  EXPECT_EQ(b.out.substr(0, 2), "1\n");

  Result c = julia("bbj-query -n 3 --point \"1 0 0 0\"");
  ASSERT_EQ(c.rc, 0) << c.err;
  EXPECT_EQ(c.out.substr(0, 2), "1\n");

  Result g = julia("query --quad-c \"1/4 0\" -n 4 --global-cap 20000 --point \"0 0\"");
  EXPECT_EQ(g.rc, 2);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(julia("query --quad-c \"0 0\" -n 1 --point \"3\"").rc, 1);
  EXPECT_EQ(julia("query --quad-c \"0 x\" -n 1 --point \"3 0\"").rc, 1);
  EXPECT_EQ(julia("filled --quad-c \"0 0\" -n 2 --format png").rc, 1);
  EXPECT_EQ(julia("filled -n 2").rc, 1);
  EXPECT_EQ(julia("filled --quad-c \"0 0\" --poly x.poly -n 2").rc, 1);
  EXPECT_EQ(julia("filled --poly does_not_exist.poly -n 2").rc, 1);
  EXPECT_EQ(julia("bbj-query -n 2 --point \"0 0 3 0\"").rc, 1);
  EXPECT_EQ(julia("nonsense").rc, 1);
}

TEST(Cli, Omega) {
  Result a = julia("omega --t 101 -n 6 -o om.cover");
  ASSERT_EQ(a.rc, 0) << a.err;
  std::ifstream in("om.cover");
  juliacert::Cover c = juliacert::read_cover(in);
  // Spoke 3 reaches down to radius 2/3; spoke 2 (absent) would pass through -1/2.
  auto at = [](double x, double y) {
    return juliacert::point2(juliacert::Dyadic::from_double(x), juliacert::Dyadic::from_double(y));
  };
  EXPECT_TRUE(c.contains(at(0.7 * std::cos(2 * M_PI / 3), 0.7 * std::sin(2 * M_PI / 3))));
  EXPECT_FALSE(c.contains(at(-0.75, 0)));
  EXPECT_TRUE(c.contains(at(0.5, 0)));

  Result f = julia("omega --filled -n 4");
  ASSERT_EQ(f.rc, 0) << f.err;
  EXPECT_NE(f.out.find("COVER"), std::string::npos);

  Result s = julia("omega --closure-slice -n 3 --kmax 16");
  ASSERT_EQ(s.rc, 0) << s.err;

  EXPECT_EQ(julia("omega --t 1x1 -n 3").rc, 1);
  EXPECT_EQ(julia("omega --closure-slice -n 3 --kmax 15").rc, 1);
  EXPECT_EQ(julia("omega --t 1 --filled -n 3").rc, 1);

  Result pgm = julia("omega --t 1 -n 3 --format pgm -o om.pgm");
  ASSERT_EQ(pgm.rc, 0) << pgm.err;
  EXPECT_EQ(slurp("om.pgm").rfind("P5", 0), 0u);
}

TEST(Cli, Orbits) {
  Result a = julia("orbits --quad-c \"0 0\" --max-period 2");
  ASSERT_EQ(a.rc, 0) << a.err;
  std::istringstream is(a.out);
  int lines = 0;
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') ++lines;
  EXPECT_EQ(lines, 1 + 3);
  EXPECT_EQ(a.out.substr(0, 2), "1 ");

  Result b = julia("orbits --quad-c \"-2 0\" --count 5");
  ASSERT_EQ(b.rc, 0) << b.err;
  EXPECT_EQ(std::count(b.out.begin(), b.out.end(), '\n'), 5);
}

TEST(Cli, CertValidate) {
  for (const char* name : {"parabolic_quarter", "golden_siegel"}) {
    Result a = julia("cert validate --poly " + kSamples + "/" + name + ".poly --cert " + kSamples + "/" + name + ".json");
    EXPECT_EQ(a.rc, 0) << name << ": " << a.err;
    EXPECT_EQ(a.out.rfind("valid", 0), 0u);
  }
  Result b = julia("cert validate --quad-c \"-1 0\" --cert " + kSamples + "/golden_siegel.json");
  EXPECT_EQ(b.rc, 1);
}

TEST(Cli, DecimalInputIsRecorded) {
  Result a = julia("filled --quad-c \"-0.1 0\" -n 2");
  ASSERT_EQ(a.rc, 0) << a.err;
  EXPECT_NE(a.out.find("-0.1"), std::string::npos);
}

TEST(Cli, Deterministic) {
  ASSERT_EQ(julia("filled --quad-c \"-1 0\" -n 3 -o det1.cover").rc, 0);
  ASSERT_EQ(julia("filled --quad-c \"-1 0\" -n 3 -o det2.cover --threads 1").rc, 0);
  EXPECT_EQ(slurp("det1.cover"), slurp("det2.cover"));
  ASSERT_EQ(julia("bbj-slice --c \"-2 0\" -n 2 --window \"-3 3 -1 1\" -o sl1.cover").rc, 0);
  ASSERT_EQ(julia("bbj-slice --c \"-2 0\" -n 2 --window \"-3 3 -1 1\" -o sl2.cover").rc, 0);
  EXPECT_EQ(slurp("sl1.cover"), slurp("sl2.cover"));
}
