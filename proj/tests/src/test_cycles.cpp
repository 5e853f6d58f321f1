#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ifspec/cycles.hpp"

#include "helpers.hpp"

using namespace ifspec;
using namespace ifspec::testing;

TEST_CASE("cycle point of a one-letter word is the map's fixed point") {
  HadamardTriple t = cantor_triple();
  // sigma_0(x) = x/4 fixes 0; sigma_{l=2}(x) = (x+2)/4 fixes 2/3
  CHECK(cycle_point({0}, t.dual(), t.l_digits) == qvec({"0"}));
  CHECK(cycle_point({1}, t.dual(), t.l_digits) == qvec({"2/3"}));
}

TEST_CASE("cycle point of a two-letter word") {
  HadamardTriple t = cantor_triple();
  // sigma_2 then sigma_0: x -> ((x+2)/4)/4 = x/16 + 1/8, fixed at 2/15
  QVec x0 = cycle_point({1, 0}, t.dual(), t.l_digits);
  CHECK(x0 == qvec({"2/15"}));
}

TEST_CASE("plane triple has only the trivial cycle") {
  HadamardTriple t = plane_triple();
  WbCycleResult res = enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 4);
  REQUIRE(res.cycles.size() == 1);
  const Cycle& c = res.cycles[0];
  CHECK(c.word == std::vector<int>{0});
  REQUIRE(c.points.size() == 1);
  CHECK(c.points[0] == qvec({"0", "0"}));
  CHECK(c.is_wb);
  REQUIRE(c.wb_values.size() == 1);
  CHECK(c.wb_values[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("plane candidates record rejection evidence") {
  HadamardTriple t = plane_triple();
  WbCycleResult res = enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 4);
  // dual-lattice points with W_B = 1 inside the attractor box
  std::vector<QVec> pts;
  for (const auto& c : res.candidates) pts.push_back(c.point);
  std::sort(pts.begin(), pts.end(), lex_less);
  // Z x (1/2)Z meets the dual attractor box [0,2/3] x [0,5/3] in four points
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == qvec({"0", "0"}));
  CHECK(pts[1] == qvec({"0", "1/2"}));
  CHECK(pts[2] == qvec({"0", "1"}));
  CHECK(pts[3] == qvec({"0", "3/2"}));

  for (const auto& c : res.candidates) {
    CHECK(c.wb_value == doctest::Approx(1.0).epsilon(1e-14));
    if (c.point == qvec({"0", "0"})) {
      CHECK(c.on_cycle);
    } else {
      CHECK(!c.on_cycle);
      // every non-trivial candidate is rejected with explicit W_B < 1 values
      CHECK(!c.rejection_wb_values.empty());
      for (double w : c.rejection_wb_values) {
        CHECK(w < 1.0);
        CHECK(w >= 0.0);
      }
      CHECK(std::is_sorted(c.rejection_wb_values.begin(), c.rejection_wb_values.end()));
    }
  }
}

TEST_CASE("candidate closures stay inside the candidate set") {
  HadamardTriple t = plane_triple();
  WbCycleResult res = enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 4);
  std::vector<QVec> pts;
  for (const auto& c : res.candidates) pts.push_back(c.point);
  for (const auto& c : res.candidates) {
    CHECK(!c.closure.empty());  // contains at least the candidate itself
    for (const auto& p : c.closure)
      CHECK(std::find(pts.begin(), pts.end(), p) != pts.end());
  }
}

TEST_CASE("quarter-Cantor triple: trivial cycle and radix spectrum") {
  HadamardTriple t = cantor_triple();
  WbCycleResult res = enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 3);
  REQUIRE(res.cycles.size() == 1);
  CHECK(res.cycles[0].points[0] == qvec({"0"}));

  SpectrumApprox s = cycle_spectrum(res.cycles[0], t.dual(), t.l_digits, 3);
  REQUIRE(s.elements.size() == 8);
  std::vector<const char*> want{"0", "2", "8", "10", "32", "34", "40", "42"};
  for (size_t i = 0; i < want.size(); ++i) CHECK(s.elements[i] == qvec({want[i]}));
}

TEST_CASE("cycle spectrum growth is nested") {
  HadamardTriple t = cantor_triple();
  WbCycleResult res = enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 2);
  const Cycle& c = res.cycles[0];
  SpectrumApprox s3 = cycle_spectrum(c, t.dual(), t.l_digits, 3);
  SpectrumApprox s4 = cycle_spectrum(c, t.dual(), t.l_digits, 4);
  CHECK(s4.elements.size() == 16);
  for (const auto& e : s3.elements)
    CHECK(std::find(s4.elements.begin(), s4.elements.end(), e) != s4.elements.end());
}

TEST_CASE("cycle spectrum demands a certified cycle") {
  HadamardTriple t = cantor_triple();
  Cycle fake;
  fake.word = {1};
  fake.points = {qvec({"2/3"})};
  fake.is_wb = false;
  CHECK_THROWS_AS(cycle_spectrum(fake, t.dual(), t.l_digits, 2), Error);
}
