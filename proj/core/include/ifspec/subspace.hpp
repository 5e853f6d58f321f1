#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifspec/fourier.hpp"
#include "ifspec/hadamard.hpp"

namespace ifspec {

// Block structure of a triple whose first r coordinates span an S-invariant
// coordinate subspace: S = [[S1, C],[0, S2]] and R = [[A1, 0],[C*, A2]].
struct BlockDecomposition {
  int dim = 0;
  int rank = 0;                          // r
  IMat s1, s2, c;                        // S blocks; C is rank x (dim - rank)
  IMat a1, a2, cstar;                    // R blocks: A1 = S1^T, A2 = S2^T, C* = C^T
  std::vector<IVec> proj_digits;         // distinct first-block projections r_i of B
  std::vector<std::vector<IVec>> fibers; // fibers[i] = { eta_{i,j} }, second blocks over r_i
  DigitSet b_digits, l_digits;           // the full digit sets, for reuse

  int n1() const { return (int)proj_digits.size(); }
  int n2(int i) const { return (int)fibers[i].size(); }
  bool fibers_equal() const;
};

// requires the lower-left (d-r) x r block of S to vanish (NotInvariant otherwise)
BlockDecomposition decompose(const HadamardTriple& t, int r);

// D_k = -sum_{l=0}^{k-1} A2^{-(l+1)} C* A1^{-(k-l)}, exact; shape (d-r) x r
QMat fiber_dk(const BlockDecomposition& dec, int k);

// truncated series g = sum_{k=1}^{depth} D_k r_{i_k} for a digit-index prefix
QVec fiber_g(const BlockDecomposition& dec, const std::vector<int>& prefix, int depth);

// m(y, i) = (1/N2(i)) sum_j e^{2 pi i eta_{i,j} . y}
Cplx fiber_mask(const BlockDecomposition& dec, int i, const DVec& y);
Cplx fiber_mask(const BlockDecomposition& dec, int i, const QVec& y);

// prod_{k=1}^{depth} m(S2^{-k} y, i_k) for a digit-index prefix (length >= depth)
Cplx fiber_mu_hat(const BlockDecomposition& dec, const std::vector<int>& prefix,
                  const DVec& y, int depth);

// W-tilde(y) = (1/N1) sum_i |m(y, i)|^2
double w_tilde(const BlockDecomposition& dec, const DVec& y);

// F(y) = prod_{k=1}^{depth} W-tilde(S2^{-k} y); requires all N2(i) equal
double f_product(const BlockDecomposition& dec, const DVec& y, int depth);

// Does W_B vanish identically on R^r x {y'}? Two independent tests, which must
// agree: (a) exact - every fiber coefficient sum_j e^{2 pi i eta_{i,j}.y'} is
// zero (Fourier uniqueness in the first block); (b) sampled - W_B below 1e-18
// at 4N random first-block points.
bool wb_vanishes_on_translate(const BlockDecomposition& dec, const QVec& y_prime);

enum class TranslateBranch { maps_in, vanishes, neither };

struct TranslateCheck {
  bool invariant = false;
  QVec y0;
  std::vector<TranslateBranch> branches;  // per l, in digit order
  std::vector<QVec> image_translates;     // y' = S2^{-1}(y0 + l_2) per l
};

// R^r x {y0} is invariant iff every l either maps the translate into itself
// or W_B vanishes identically on the image translate
TranslateCheck check_invariant_translate(const HadamardTriple& t, int r, const QVec& y0);

// candidate translates: distinct second components of the dual-lattice points
// of B inside the X_L bounding box (lex-sorted)
std::vector<QVec> candidate_translates(const HadamardTriple& t, int r);

enum class ChainVerdict { periodic, escaped, exhausted };

struct EscapeChain {
  QVec start;
  std::vector<QVec> states;  // visited second components, starting at y0
  std::vector<int> digits;   // chosen l index per transition
  ChainVerdict verdict = ChainVerdict::exhausted;
};

// Deterministic walk through second-component transitions y -> S2^{-1}(y+l_2)
// restricted to images where W_B does not vanish identically: always move to
// the lex-least unvisited reachable value; PERIODIC when every reachable value
// was already visited, ESCAPED one step after leaving the candidate set.
EscapeChain trace_escape(const HadamardTriple& t, int r, const QVec& y0, int max_steps = 32);

struct PeriodCheck {
  bool pass = true;
  bool structural = false;  // holds identically: sampled vectors all integer
  double max_deviation = 0.0;
};

struct SubspaceConditionReport {
  QVec y0;
  std::vector<int> fixed_digits;  // l indices with sigma_{l_2}(y0) = y0
  // (1) Lambda_1 is a spectrum for the projected measure mu_1 (spot check)
  bool parseval_pass = false;
  double parseval_max_deviation = 0.0;
  // (2a) S(Lambda_1 x {-y0}) + L contains Lambda_1 x {-y0} on truncations
  bool containment_pass = false;
  // (2b) every (lambda_1, -y0) is an S-period for W_B
  PeriodCheck period;
  // (3) (A1, {r_i}, L1(l2^0)) is a Hadamard triple
  bool hadamard_pass = false;
  double hadamard_defect = 0.0;
  // N2(i) all equal
  bool fibers_equal = false;
  std::vector<int> fiber_counts;
  // mu_1 no-overlap: r_i pairwise distinct mod A1 Z^r (sufficient condition)
  bool no_overlap = false;     // verified true
  bool no_overlap_verified = false;  // false => UNVERIFIED, not a failure
  bool all_pass = false;
};

// Corollary-style conditions at y0 = 0 (l2^0 = 0)
SubspaceConditionReport check_corollary_conditions(const HadamardTriple& t, int r,
                                                   const SpectrumGenerator& lambda1,
                                                   int depth);

// Theorem-style conditions at general y0 (NoFixedDigit when no l fixes y0)
SubspaceConditionReport check_theorem_conditions(const HadamardTriple& t, int r,
                                                 const QVec& y0,
                                                 const SpectrumGenerator& lambda1,
                                                 int depth);

// Lambda_n = L + SL + ... + S^{n-1}L + S^n (Lambda_1 x {-y0}), deduplicated;
// lambda1_depth fixes the Lambda_1 truncation. ConditionsNotMet unless the
// condition report passed.
SpectrumApprox subspace_spectrum(const HadamardTriple& t, int r, const QVec& y0,
                                 const SpectrumGenerator& lambda1, int lambda1_depth,
                                 int depth, const SubspaceConditionReport& report);

}  // namespace ifspec
