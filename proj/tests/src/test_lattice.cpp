#include <doctest.h>

#include <algorithm>

#include "ifspec/lattice.hpp"
#include "ifspec/rng.hpp"

#include "helpers.hpp"

using namespace ifspec;
using namespace ifspec::testing;

TEST_CASE("expanding check accepts and rejects") {
  CHECK(ExpandingMatrix(int_matrix(2, 2, {4, 0, 0, 4})).min_eigenvalue_modulus() ==
        doctest::Approx(4.0));
  CHECK_THROWS_AS(ExpandingMatrix(int_matrix(2, 2, {1, 1, 0, 1})), Error);
  CHECK_THROWS_AS(ExpandingMatrix(int_matrix(1, 1, {1})), Error);
  CHECK_NOTHROW(ExpandingMatrix(int_matrix(1, 1, {-2})));
}

TEST_CASE("contraction bound for diag(4,4)") {
  ContractionBound cb = contraction_bound(ExpandingMatrix(int_matrix(2, 2, {4, 0, 0, 4})));
  CHECK(cb.k0 == 1);
  CHECK(cb.eta == Rat(1, 4));
  CHECK(cb.prefix_sum == Rat(1, 4));
  CHECK(cb.tail_sum() == Rat(1, 3));
}

TEST_CASE("contraction bound really bounds the geometric tail") {
  // ||V^{-k}||_inf summed numerically stays below the certified tail bound
  ExpandingMatrix v(int_matrix(2, 2, {2, 1, 0, 3}));
  ContractionBound cb = contraction_bound(v);
  Rat direct(0);
  QMat p = QMat::identity(2);
  for (int k = 1; k <= 40; ++k) {
    p = p * v.inverse();
    direct += inf_norm(p);
  }
  CHECK(direct < cb.tail_sum());
}

TEST_CASE("digit sets validate their input") {
  CHECK_THROWS_AS(DigitSet(2, {ivec({0, 0}), ivec({0, 0})}), Error);  // duplicate
  CHECK_THROWS_AS(DigitSet(2, {ivec({0, 0}), ivec({1})}), Error);     // ragged
  DigitSet b = digit_set(2, {{0, 0}, {1, 2}});
  CHECK(b.size() == 2);
  CHECK(b[1] == ivec({1, 2}));
}

TEST_CASE("dual lattice of the plane digit set is Z x (1/2)Z") {
  LatticeBasis g = dual_lattice(digit_set(2, {{0, 0}, {0, 2}, {1, 4}, {1, 6}}));
  CHECK(g.basis_vector(0) == qvec({"1", "0"}));
  CHECK(g.basis_vector(1) == qvec({"0", "1/2"}));
  CHECK(g.contains(qvec({"3", "-5/2"})));
  CHECK(!g.contains(qvec({"1/2", "0"})));
  CHECK(!g.contains(qvec({"0", "1/4"})));
}

TEST_CASE("lattice basis canonical form properties") {
  // random integer generators: the canonical basis must be lower triangular
  // with positive diagonal, reduced left of the diagonal, and span the same set
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<QVec> gen;
    for (int k = 0; k < 3; ++k) {
      QVec v(2);
      for (auto& e : v) e = Rat((long long)(rng.next_below(9)) - 4);
      gen.push_back(v);
    }
    LatticeBasis lb = LatticeBasis::from_generators(2, gen);
    const QMat& h = lb.basis();
    CHECK(h(0, 1) == Rat(0));
    CHECK(h(0, 0) > Rat(0));
    CHECK(h(1, 1) > Rat(0));
    CHECK(h(1, 0) >= Rat(0));
    CHECK(h(1, 0) < h(1, 1));
    for (const auto& v : gen) CHECK(lb.contains(v));
  }
}

TEST_CASE("points in a box") {
  LatticeBasis g = dual_lattice(digit_set(2, {{0, 0}, {0, 2}, {1, 4}, {1, 6}}));
  auto pts = g.points_in_box(qvec({"0", "0"}), qvec({"1", "3/2"}));
  // Z x (1/2)Z meets [0,1] x [0,3/2] in 2 x 4 points
  CHECK(pts.size() == 8);
  CHECK(std::find(pts.begin(), pts.end(), qvec({"1", "3/2"})) != pts.end());
  CHECK(std::find(pts.begin(), pts.end(), qvec({"0", "1/2"})) != pts.end());
}

TEST_CASE("unimodular validation") {
  CHECK_NOTHROW(UnimodularMatrix(int_matrix(2, 2, {4, -1, 1, 0})));
  CHECK_THROWS_AS(UnimodularMatrix(int_matrix(2, 2, {4, -1, 0, 1})), Error);  // det 4
  UnimodularMatrix m(int_matrix(2, 2, {1, 1, 0, 1}));
  CHECK(m.inverse() == int_matrix(2, 2, {1, -1, 0, 1}));
}

TEST_CASE("column Hermite form of a known matrix") {
  IMat h = column_hnf(int_matrix(2, 2, {2, 1, 1, 3}));
  // lower triangular, positive diagonal, |det| preserved (= 5)
  CHECK(h(0, 1) == Int(0));
  CHECK(h(0, 0) == Int(1));
  CHECK(h(1, 1) == Int(5));
  CHECK(h(1, 0) >= Int(0));
  CHECK(h(1, 0) < Int(5));
}
