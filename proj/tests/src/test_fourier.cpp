#include <doctest.h>

#include <cmath>
#include <complex>

#include "ifspec/fourier.hpp"
#include "ifspec/rng.hpp"

#include "helpers.hpp"

using namespace ifspec;
using namespace ifspec::testing;

namespace {

// reference mask evaluation with libm only, no phase folding
Cplx mask_reference(const DigitSet& b, const DVec& x) {
  Cplx acc{0.0, 0.0};
  for (const auto& v : b.vectors()) {
    double t = 0;
    for (int i = 0; i < b.dim(); ++i) t += to_double(v[i]) * x[i];
    acc += std::polar(1.0, 2.0 * M_PI * t);
  }
  return acc / (double)b.size();
}

}  // namespace

TEST_CASE("mask agrees with the reference at random points") {
  DigitSet b = plane_triple().b_digits;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    DVec x{rng.next_in(-20, 20), rng.next_in(-20, 20)};
    Cplx got = mask_eval(b, x);
    Cplx want = mask_reference(b, x);
    CHECK(std::abs(got - want) < 1e-9);
  }
}

TEST_CASE("mask at rational points uses exact phases") {
  DigitSet b = plane_triple().b_digits;
  CHECK(mask_eval(b, qvec({"0", "0"})) == Cplx{1.0, 0.0});
  // y = 1/4 kills the plane mask: phases 1, -1, e^{2 pi i(x+1)}, -e^{2 pi i(x+1)}
  CHECK(std::abs(mask_eval(b, qvec({"0", "1/4"}))) < 1e-15);
  CHECK(std::abs(mask_eval(b, qvec({"1/3", "1/4"}))) < 1e-15);
  // y = 1/2 gives phases 1,1,e^{2 pi i(x+2)},e^{2 pi i(x+3)}
  CHECK(std::abs(mask_eval(b, qvec({"0", "1/2"})) - Cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("wb stays in the unit interval") {
  DigitSet b = plane_triple().b_digits;
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    DVec x{rng.next_in(-50, 50), rng.next_in(-50, 50)};
    double w = wb_eval(b, x);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0 + 1e-12);
  }
}

TEST_CASE("partition of unity for shipped triples") {
  for (const HadamardTriple& t : {plane_triple(), cantor_triple()}) {
    ExpandingMatrix s = t.dual();
    Rng rng(17);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      DVec x(t.dim());
      for (auto& e : x) e = rng.next_in(-2, 2);
      worst = std::max(worst, partition_residual(t.b_digits, t.l_digits, s, x));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("partition fails for the control pair") {
  HadamardTriple t = control_triple();
  DVec x{0.0};
  CHECK(partition_residual(t.b_digits, t.l_digits, t.dual(), x) > 0.5);
}

TEST_CASE("mu_hat at the origin is one") {
  HadamardTriple t = plane_triple();
  MuHatResult r = mu_hat(t.scaling, t.b_digits, DVec{0.0, 0.0}, 0);
  CHECK(std::abs(r.value - Cplx{1.0, 0.0}) < 1e-14);
  CHECK(r.tail_bound < 1e-12);
}

TEST_CASE("mu_hat vanishes on nonzero quarter-Cantor spectrum points") {
  HadamardTriple t = cantor_triple();
  for (double lam : {2.0, 8.0, 10.0, 32.0}) {
    MuHatResult r = mu_hat(t.scaling, t.b_digits, DVec{lam}, 0);
    CHECK(std::abs(r.value) < 1e-12);
  }
}

TEST_CASE("fixed-depth product matches a hand-rolled evaluation") {
  HadamardTriple t = cantor_triple();
  MuHatEvaluator ev(t.scaling, t.b_digits);
  DVec x{0.7};
  Cplx direct{1.0, 0.0};
  double y = 0.7;
  for (int k = 0; k < 9; ++k) {
    y /= 4.0;
    direct *= (Cplx{1.0, 0.0} + std::polar(1.0, 2.0 * M_PI * y)) / 2.0;
  }
  MuHatResult r = ev.eval(x, 9);
  CHECK(std::abs(r.value - direct) < 1e-12);
  CHECK(r.depth == 9);
  CHECK(r.tail_bound > 0);
}

TEST_CASE("auto depth honors the certified tail") {
  HadamardTriple t = cantor_triple();
  MuHatEvaluator ev(t.scaling, t.b_digits, 1e-10);
  DVec x{3.0};
  int k = ev.auto_depth(x);
  CHECK(ev.tail_bound(x, k) < 1e-10);
  MuHatResult r = ev.eval(x, 0);
  CHECK(r.depth == k);
}

TEST_CASE("squared modulus is consistent with the complex product") {
  HadamardTriple t = plane_triple();
  MuHatEvaluator ev(t.scaling, t.b_digits, 1e-10);
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    DVec x{rng.next_in(-30, 30), rng.next_in(-30, 30)};
    double sq = ev.eval_sq(x, 0, 0.0);
    Cplx v = ev.eval(x, 0).value;
    CHECK(sq == doctest::Approx(std::norm(v)).epsilon(5e-9));
  }
}

TEST_CASE("orthogonality defect of the quarter-Cantor spectrum") {
  HadamardTriple t = cantor_triple();
  SpectrumApprox lam = cantor_lambda1()(6);
  DefectResult d = orthogonality_defect(t.scaling, t.b_digits, lam, 64.0);
  CHECK(d.pairs > 0);
  CHECK(d.defect < 1e-8);
}

TEST_CASE("parseval certification on the quarter-Cantor spectrum") {
  HadamardTriple t = cantor_triple();
  std::vector<DVec> grid{{0.0}, {0.37}, {0.81}};
  CertificationReport rep =
      parseval_certify(t.scaling, t.b_digits, cantor_lambda1(), grid, 6, 0, 1e-2);
  CHECK(rep.pass);
  CHECK(rep.max_deviation < 1e-3);
  CHECK(rep.monotone);
  CHECK(rep.nested);
  CHECK(rep.duplicate_count == 0);
  CHECK(rep.spectrum_sizes.size() == 7);
  CHECK(rep.spectrum_sizes[6] == 64);
  // partial sums end within the certified window of 1
  for (const auto& col : rep.partial_sums) {
    CHECK(col.size() == 7);
    CHECK(col.back() == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("certification set bookkeeping matches between int and rational paths") {
  HadamardTriple t = cantor_triple();
  // a deliberately dirty generator: duplicates at depth 0, non-nested at 1
  auto dirty_int = [](int depth) {
    SpectrumApprox s;
    s.depth = depth;
    if (depth == 0)
      s.elements = {qvec({"0"}), qvec({"1"}), qvec({"1"})};
    else
      s.elements = {qvec({"0"}), qvec({"2"})};
    return s;
  };
  auto dirty_rat = [](int depth) {
    SpectrumApprox s;
    s.depth = depth;
    if (depth == 0)
      s.elements = {qvec({"1/2"}), qvec({"3/2"}), qvec({"3/2"})};
    else
      s.elements = {qvec({"1/2"}), qvec({"5/2"})};
    return s;
  };
  std::vector<DVec> grid{{0.9}};
  CertificationReport a = parseval_certify(t.scaling, t.b_digits, dirty_int, grid, 1, 0, 1e-2);
  std::vector<DVec> shifted{{0.4}};  // 0.4 + (k + 1/2) = 0.9 + k
  CertificationReport b =
      parseval_certify(t.scaling, t.b_digits, dirty_rat, shifted, 1, 0, 1e-2);
  CHECK(a.duplicate_count == 1);
  CHECK(b.duplicate_count == 1);
  CHECK(!a.nested);
  CHECK(!b.nested);
  CHECK(a.spectrum_sizes == b.spectrum_sizes);
  REQUIRE(a.partial_sums.size() == 1);
  REQUIRE(b.partial_sums.size() == 1);
  for (size_t n = 0; n < a.partial_sums[0].size(); ++n)
    CHECK(a.partial_sums[0][n] == doctest::Approx(b.partial_sums[0][n]).epsilon(1e-6));
}

TEST_CASE("default grid starts at the origin and is reproducible") {
  AffineIfs ifs(cantor_triple().scaling, cantor_triple().b_digits);
  auto g1 = default_grid(ifs, 5, 31);
  auto g2 = default_grid(ifs, 5, 31);
  CHECK(g1.size() == 6);
  CHECK(g1[0] == DVec{0.0});
  CHECK(g1 == g2);
}
