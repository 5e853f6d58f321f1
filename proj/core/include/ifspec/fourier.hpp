#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ifspec/hadamard.hpp"
#include "ifspec/ifs.hpp"

namespace ifspec {

// m_B(x) = N^{-1} sum_b e^{2 pi i b.x}; both overloads reduce the phases
// mod 1 (digits are integer vectors), keeping accuracy at large arguments
Cplx mask_eval(const DigitSet& b, const DVec& x);
Cplx mask_eval(const DigitSet& b, const QVec& x);

// W_B(x) = |m_B(x)|^2, in [0,1]
double wb_eval(const DigitSet& b, const DVec& x);
double wb_eval(const DigitSet& b, const QVec& x);

// |sum_l W_B(S^{-1}(x+l)) - 1|; zero for Hadamard triples
double partition_residual(const DigitSet& b, const DigitSet& l, const ExpandingMatrix& s,
                          const DVec& x);

struct MuHatResult {
  Cplx value;
  int depth = 0;          // product depth actually used
  double tail_bound = 0;  // certified bound on |truncation - full product|
};

// Truncated infinite product mu_hat(x) = prod_{k>=1} m_B(S^{-k} x), S = R^T.
// The certified tail bound uses |1 - prod_{k>K} m(S^{-k}x)| <=
// 2 pi max_b ||b||_1 ||S^{-K}x||_inf sum_{j>=1} ||S^{-j}||_inf.
class MuHatEvaluator {
 public:
  MuHatEvaluator(const ExpandingMatrix& r, const DigitSet& b, double tail_tol = 1e-12);

  MuHatResult eval(const DVec& x, int depth = 0) const;  // depth <= 0: auto
  // |mu_hat(x)|^2 with a sound early exit: once the partial product's square
  // modulus falls below floor_sq the remaining factors (all <= 1 in modulus)
  // cannot raise it, and the partial value is returned. With depth <= 0 the
  // truncation point is chosen so the dropped tail multiplies the result by
  // a certified factor in [1 - tail_tol, 1], and the window midpoint is
  // returned (residual relative error <= tail_tol / 2)
  double eval_sq(const DVec& x, int depth, double floor_sq) const;
  int auto_depth(const DVec& x) const;
  double tail_bound(const DVec& x, int depth) const;

  const DigitSet& digits() const { return digits_; }

 private:
  double step_(double* y, int d) const;
  double wb_(const double* y, int d) const;

  DigitSet digits_;
  Mat<double> s_inv_;
  std::vector<DVec> digit_doubles_;
  double phase_coeff_;  // 2 pi max_b ||b||_1
  double geo_tail_;     // sum_{j>=1} ||S^{-j}||_inf
  double sq_coeff_;     // 2 pi^2 / N^2 * sum_{b != b'} ||b - b'||_1^2
  double geo2_tail_;    // sum_{j>=1} ||S^{-j}||_inf^2
  double tail_tol_;
  // flattened hot-path tables
  std::vector<double> sinv_flat_;
  std::vector<double> nonzero_flat_;
  int zero_digits_ = 0;
  bool diagonal_ = false;
};

MuHatResult mu_hat(const ExpandingMatrix& r, const DigitSet& b, const DVec& x,
                   int product_depth = 0, double tail_tol = 1e-12);

// Deduplicated truncation of a candidate spectrum, lex-sorted.
struct SpectrumApprox {
  int depth = 0;
  std::vector<QVec> elements;
  std::string provenance;
};

// nested truncations: gen(n) must satisfy gen(n).elements subset gen(n+1).elements
using SpectrumGenerator = std::function<SpectrumApprox(int)>;

struct DefectResult {
  double defect = 0.0;  // max |mu_hat(lambda - lambda')| over pairs in window
  std::size_t pairs = 0;
};

DefectResult orthogonality_defect(const ExpandingMatrix& r, const DigitSet& b,
                                  const SpectrumApprox& lambda, double radius,
                                  std::size_t pair_budget = 1000000);

struct CertificationReport {
  std::vector<DVec> grid;
  std::vector<std::vector<double>> partial_sums;  // [grid point][spectrum depth 0..n]
  std::vector<std::size_t> spectrum_sizes;        // per depth
  int spectrum_depth = 0;
  int product_depth = 0;  // 0 = auto per evaluation
  double tol = 1e-2;
  double max_deviation = 0.0;       // max |s_n(x) - 1| at the final depth
  double product_tail_bound = 0.0;  // worst certified product-truncation term
  std::size_t duplicate_count = 0;  // repeated elements inside one truncation
  bool monotone = true;             // partial sums nondecreasing in depth
  bool nested = true;               // truncations nested as sets
  bool pass = false;                // max_deviation < tol
};

// Per grid point x, partial Parseval sums s_n(x) = sum_{lambda in gen(n)}
// |mu_hat(x + lambda)|^2, accumulated incrementally over new elements only.
CertificationReport parseval_certify(const ExpandingMatrix& r, const DigitSet& b,
                                     const SpectrumGenerator& gen,
                                     const std::vector<DVec>& grid, int spectrum_depth,
                                     int product_depth = 0, double certify_tol = 1e-2);

// origin followed by `count` uniform points in the attractor bounding box
std::vector<DVec> default_grid(const AffineIfs& ifs, int count, std::uint64_t seed);

}  // namespace ifspec
