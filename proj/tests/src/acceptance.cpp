// Acceptance checks for the plane example and its 1-D companions. Each
// invocation runs one numbered criterion and prints a single line
//   criterion <n>: PASS|FAIL (<measured values>; <elapsed>)
// exiting 0 on pass, 1 on fail, 2 on usage errors. Criteria with a pinned
// runtime budget also fail when the budget is exceeded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "ifspec/cycles.hpp"
#include "ifspec/ifs.hpp"
#include "ifspec/paths.hpp"
#include "ifspec/problem.hpp"
#include "ifspec/rng.hpp"
#include "ifspec/subspace.hpp"

namespace {

using namespace ifspec;

IMat imat2(int a, int b, int c, int d) {
  IMat m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

DigitSet digits2(std::initializer_list<std::pair<int, int>> rows) {
  std::vector<IVec> vs;
  for (auto [a, b] : rows) vs.push_back(IVec{Int(a), Int(b)});
  return DigitSet(2, std::move(vs));
}

DigitSet digits1(std::initializer_list<int> rows) {
  std::vector<IVec> vs;
  for (int a : rows) vs.push_back(IVec{Int(a)});
  return DigitSet(1, std::move(vs));
}

HadamardTriple plane() {
  return HadamardTriple(ExpandingMatrix(imat2(4, 0, 0, 4)),
                        digits2({{0, 0}, {0, 2}, {1, 4}, {1, 6}}),
                        digits2({{0, 0}, {2, 0}, {2, 1}, {0, 5}}));
}

HadamardTriple cantor() {
  IMat r(1, 1);
  r(0, 0) = 4;
  return HadamardTriple(ExpandingMatrix(r), digits1({0, 1}), digits1({0, 2}));
}

HadamardTriple control() {
  IMat r(1, 1);
  r(0, 0) = 4;
  return HadamardTriple(ExpandingMatrix(r), digits1({0, 2}), digits1({0, 2}));
}

SpectrumGenerator quarter_radix() {
  IMat a(1, 1);
  a(0, 0) = 4;
  return radix_spectrum_generator(a, {IVec{Int(0)}, IVec{Int(2)}});
}

std::string g3(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

std::string list_g3(const std::vector<double>& vs) {
  std::string s = "{";
  for (size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + g3(vs[i]);
  return s + "}";
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1: the 4x4 matrix has entries exactly +-1/2 in the printed sign pattern
Outcome crit1() {
  HadamardTriple t = plane();
  CMat h = hadamard_matrix(t.scaling, t.b_digits, t.l_digits);
  static const int sign[4][4] = {
      {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, -1, 1}, {1, -1, 1, -1}};
  bool exact = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      exact = exact && h(i, j).real() == sign[i][j] * 0.5 && h(i, j).imag() == 0.0;
  HadamardCheck hc = is_hadamard_triple(t.scaling, t.b_digits, t.l_digits);
  Outcome o;
  o.pass = exact && hc.accepted && hc.defect < 1e-12;
  o.detail = std::string("entries exactly +-1/2 in the printed pattern: ") +
             (exact ? "yes" : "NO") + ", unitarity defect " + g3(hc.defect);
  return o;
}

// 2: dual lattice of B is Z x (1/2)Z with canonical basis {(1,0),(0,1/2)}
Outcome crit2() {
  LatticeBasis g = dual_lattice(plane().b_digits);
  const QMat& m = g.basis();
  bool exact = m.rows() == 2 && m.cols() == 2 && m(0, 0) == Rat(1) && m(1, 0) == Rat(0) &&
               m(0, 1) == Rat(0) && m(1, 1) == Rat(1, 2);
  bool member = g.contains({Rat(1), Rat(0)}) && g.contains({Rat(0), Rat(1, 2)}) &&
                g.contains({Rat(-3), Rat(7, 2)}) && !g.contains({Rat(0), Rat(1, 4)}) &&
                !g.contains({Rat(1, 2), Rat(0)});
  Outcome o;
  o.pass = exact && member;
  o.detail = std::string("canonical basis {(1,0),(0,1/2)}: ") + (exact ? "exact" : "NO") +
             ", membership spot checks: " + (member ? "pass" : "FAIL");
  return o;
}

// 3: only the trivial W_B-cycle; (0,1/2) and (0,1) rejected with W_B < 1
Outcome crit3() {
  HadamardTriple t = plane();
  WbCycleResult res = enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 4);
  bool trivial_only = res.cycles.size() == 1 && res.cycles[0].points.size() == 1 &&
                      res.cycles[0].points[0] == QVec{Rat(0), Rat(0)};

  auto rejected = [&](const QVec& p, std::string* vals) {
    for (const auto& c : res.candidates) {
      if (c.point != p) continue;
      if (c.on_cycle || c.rejection_wb_values.empty()) return false;
      for (double w : c.rejection_wb_values)
        if (!(w < 1.0)) return false;
      *vals = list_g3(c.rejection_wb_values);
      return true;
    }
    return false;
  };
  std::string v_half, v_one;
  bool r_half = rejected({Rat(0), Rat(1, 2)}, &v_half);
  bool r_one = rejected({Rat(0), Rat(1)}, &v_one);

  Outcome o;
  o.pass = trivial_only && r_half && r_one;
  o.detail = std::string("trivial cycle only: ") + (trivial_only ? "yes" : "NO") +
             "; (0,1/2) rejected with W_B " + (r_half ? v_half : "MISSING") +
             "; (0,1) rejected with W_B " + (r_one ? v_one : "MISSING");
  return o;
}

// 4: R x {0} invariant (vanishing on (2,1) and (0,5)); conjugated chains from
// y in {0,2,4,6} all escape within 10 steps
Outcome crit4() {
  HadamardTriple t = plane();
  TranslateCheck tc = check_invariant_translate(t, 1, {Rat(0)});
  bool inv_ok = tc.invariant && tc.branches.size() == 4 &&
                tc.branches[0] == TranslateBranch::maps_in &&
                tc.branches[1] == TranslateBranch::maps_in &&
                tc.branches[2] == TranslateBranch::vanishes &&
                tc.branches[3] == TranslateBranch::vanishes;

  HadamardTriple conj = conjugate_triple(UnimodularMatrix(imat2(4, -1, 1, 0)), t);
  bool chains_ok = true;
  std::string steps;
  for (int y : {0, 2, 4, 6}) {
    EscapeChain c = trace_escape(conj, 1, {Rat(y)}, 10);
    chains_ok = chains_ok && c.verdict == ChainVerdict::escaped;
    steps += (steps.empty() ? "" : ",") + std::to_string(c.digits.size());
  }

  Outcome o;
  o.pass = inv_ok && chains_ok;
  o.detail = std::string("R x {0} invariant, vanishing branches on (2,1),(0,5): ") +
             (inv_ok ? "yes" : "NO") + "; conjugated chains from y=0,2,4,6 escaped in " +
             steps + " steps: " + (chains_ok ? "yes" : "NO");
  return o;
}

// 5: quarter-Cantor orthogonality (< 1e-8 over the 4^4 window) and Parseval
// within 1e-2 at 20 random x in [0,1]
Outcome crit5() {
  HadamardTriple t = cantor();
  SpectrumGenerator gen = quarter_radix();
  SpectrumApprox lam8 = gen(8);
  DefectResult dr = orthogonality_defect(t.scaling, t.b_digits, lam8, 256.0);

  Rng rng(20260815);
  std::vector<DVec> grid;
  for (int i = 0; i < 20; ++i) grid.push_back({rng.next_double()});
  CertificationReport rep = parseval_certify(t.scaling, t.b_digits, gen, grid, 8, 0, 1e-2);

  Outcome o;
  o.pass = dr.defect < 1e-8 && rep.pass && rep.monotone && rep.nested;
  o.detail = "orthogonality defect " + g3(dr.defect) + " over " + std::to_string(dr.pairs) +
             " pairs; parseval max deviation " + g3(rep.max_deviation) +
             " vs tol 1e-2 itemized as spectrum tail " +
             g3(rep.max_deviation - rep.product_tail_bound) + " + certified product tail " +
             g3(rep.product_tail_bound);
  return o;
}

// 6: plane Parseval at spectrum depth 6 on the 5x5 grid in [0,1]^2; monotone
// partial sums are exact, the 1e-2 deviation target is the measured verdict
Outcome crit6() {
  HadamardTriple t = plane();
  SpectrumGenerator lam1 = quarter_radix();
  SubspaceConditionReport cond = check_theorem_conditions(t, 1, {Rat(0)}, lam1, 6);
  if (!cond.all_pass) return {false, "spectrum-theorem conditions unexpectedly failed"};
  SpectrumGenerator gen = [&](int n) {
    return subspace_spectrum(t, 1, {Rat(0)}, lam1, 6, n, cond);
  };
  std::vector<DVec> grid;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) grid.push_back({i / 4.0, j / 4.0});
  CertificationReport rep = parseval_certify(t.scaling, t.b_digits, gen, grid, 6, 0, 1e-2);

  Outcome o;
  o.pass = rep.pass && rep.monotone;
  o.detail = "max deviation " + g3(rep.max_deviation) + " vs tol 1e-2 at spectrum depth 6 (" +
             std::to_string(rep.spectrum_sizes.back()) +
             " elements, 5x5 grid); partial sums monotone nondecreasing: " +
             (rep.monotone ? "yes" : "NO");
  return o;
}

// 7: partition of unity for the shipped Hadamard triples; control residual
// above 0.5 at the origin
Outcome crit7() {
  double worst = 0;
  for (const HadamardTriple& t : {plane(), cantor()}) {
    ExpandingMatrix s = t.dual();
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
      DVec x(t.dim());
      for (auto& e : x) e = rng.next_in(-2.0, 2.0);
      worst = std::max(worst, partition_residual(t.b_digits, t.l_digits, s, x));
    }
  }
  HadamardTriple c = control();
  double control_res = partition_residual(c.b_digits, c.l_digits, c.dual(), DVec{0.0});

  Outcome o;
  o.pass = worst < 1e-12 && control_res > 0.5;
  o.detail = "max residual " + g3(worst) + " over 100 random x per shipped triple; control residual " +
             g3(control_res) + " at x = 0";
  return o;
}

// 8: no Hadamard completion for R = 3, B = {0,2}
Outcome crit8() {
  IMat r(1, 1);
  r(0, 0) = 3;
  std::vector<DigitSet> found = search_completions(ExpandingMatrix(r), digits1({0, 2}));
  Outcome o;
  o.pass = found.empty();
  o.detail = "completions found over all residues mod 3: " + std::to_string(found.size());
  return o;
}

// 9: path-measure statistics at 10^5 paths, all within 3 standard errors
Outcome crit9() {
  HadamardTriple t = plane();
  InvariantSetSpec line = InvariantSetSpec::subspace(1, DVec{0.0});
  AffineIfs dual_ifs(t.dual(), t.l_digits);
  BoundingBox box = bounding_box(dual_ifs);
  Rng rng(20260815);
  auto random_x = [&]() {
    DVec x(2);
    for (int i = 0; i < 2; ++i) {
      double lo = to_double(box.lo[i]), hi = to_double(box.hi[i]);
      x[i] = rng.next_in(lo, hi);
    }
    return x;
  };

  const int n_paths = 100000, n_steps = 64;
  bool h_ok = true;
  double worst_h_dev = 0;
  DVec x0;
  for (int i = 0; i < 5; ++i) {
    DVec x = random_x();
    if (i == 0) x0 = x;
    HfEstimate h = estimate_hf(x, t, line, n_steps, n_paths, derive_seed(1, i));
    double dev = std::abs(h.value - 1.0);
    worst_h_dev = std::max(worst_h_dev, dev);
    h_ok = h_ok && dev <= std::max(3.0 * h.stderr_, 1e-12);
  }
  RuelleCheck rc = ruelle_residual(x0, t, line, n_steps, n_paths, derive_seed(2, 0));
  TotalMassCheck tm = total_mass_check(x0, t, {line}, n_steps, n_paths, derive_seed(3, 0));

  Outcome o;
  o.pass = h_ok && rc.pass && tm.pass;
  o.detail = "max |h-1| " + g3(worst_h_dev) + " over 5 random x; ruelle residual " +
             g3(rc.residual) + " (3 sigma " + g3(rc.threshold) + "); total mass " +
             g3(tm.mass) + " +- " + g3(tm.stderr_);
  return o;
}

// 10: conjugation by random unimodular M preserves the Hadamard defect and
// satisfies mu_hat_{MB}((M^T)^{-1} x) = mu_hat_B(x)
Outcome crit10() {
  HadamardTriple t = plane();
  MuHatEvaluator base(t.scaling, t.b_digits, 1e-12);
  Rng rng(10101);
  double worst_defect = 0, worst_diff = 0;
  for (int k = 0; k < 10; ++k) {
    // product of elementary shears: row_i += c * row_j, det stays 1
    IMat m = imat2(1, 0, 0, 1);
    for (int op = 0; op < 5; ++op) {
      int i = (int)rng.next_below(2), j = 1 - i;
      static const int cs[4] = {-2, -1, 1, 2};
      Int c(cs[rng.next_below(4)]);
      for (int col = 0; col < 2; ++col) m(i, col) += c * m(j, col);
    }
    UnimodularMatrix um(m);
    HadamardTriple conj = conjugate_triple(um, t);
    worst_defect = std::max(worst_defect, conj.defect);

    MuHatEvaluator ev(conj.scaling, conj.b_digits, 1e-12);
    const IMat& minv = um.inverse();
    for (int s = 0; s < 20; ++s) {
      DVec x{rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
      // y = (M^T)^{-1} x = (M^{-1})^T x, exact integer matrix
      DVec y(2, 0.0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) y[i] += to_double(Rat(minv(j, i))) * x[j];
      double diff = std::abs(ev.eval(y, 0).value - base.eval(x, 0).value);
      worst_diff = std::max(worst_diff, diff);
    }
  }
  Outcome o;
  o.pass = worst_defect < 1e-12 && worst_diff < 1e-10;
  o.detail = "worst conjugate defect " + g3(worst_defect) + "; worst mu_hat mismatch " +
             g3(worst_diff) + " over 10 conjugates x 20 points";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion number 1..10>\n", argv[0]);
    return 2;
  }
  char* end = nullptr;
  long n = std::strtol(argv[1], &end, 10);
  if (end == argv[1] || *end != '\0' || n < 1 || n > 10) {
    std::fprintf(stderr, "usage: %s <criterion number 1..10>\n", argv[0]);
    return 2;
  }

  // pinned runtime budgets, milliseconds (0 = no pin); "milliseconds" pins
  // are enforced as < 1 s
  static const double budget_ms[11] = {0,    1000, 0, 1000, 0,    10000,
                                       60000, 0,    1000, 30000, 0};

  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (n) {
      case 1: o = crit1(); break;
      case 2: o = crit2(); break;
      case 3: o = crit3(); break;
      case 4: o = crit4(); break;
      case 5: o = crit5(); break;
      case 6: o = crit6(); break;
      case 7: o = crit7(); break;
      case 8: o = crit8(); break;
      case 9: o = crit9(); break;
      case 10: o = crit10(); break;
    }
  } catch (const ifspec::Error& e) {
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();

  bool pass = o.pass;
  std::string timing;
  {
    char b[64];
    std::snprintf(b, sizeof b, "%.1f ms", ms);
    timing = b;
  }
  if (budget_ms[n] > 0) {
    if (ms > budget_ms[n]) {
      pass = false;
      timing += " EXCEEDS budget";
    }
    char b[64];
    std::snprintf(b, sizeof b, " of %.0f ms budget", budget_ms[n]);
    timing += b;
  }

  std::printf("criterion %ld: %s (%s; %s)\n", n, pass ? "PASS" : "FAIL", o.detail.c_str(),
              timing.c_str());
  return pass ? 0 : 1;
}
