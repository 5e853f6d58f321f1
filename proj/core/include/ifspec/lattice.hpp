#pragma once

#include <optional>
#include <vector>

#include "ifspec/linalg.hpp"

namespace ifspec {

struct ExpandingCheck {
  bool expanding = false;
  double min_modulus = 0.0;
};

// true iff every eigenvalue modulus exceeds 1 + margin (floating-point check)
ExpandingCheck is_expanding(const IMat& m, double margin = 1e-9);

// d x d integer matrix, all eigenvalue moduli > 1; the scaling R (and S = R^T).
class ExpandingMatrix {
 public:
  explicit ExpandingMatrix(IMat entries);

  int dim() const { return entries_.rows(); }
  const IMat& entries() const { return entries_; }
  double min_eigenvalue_modulus() const { return min_modulus_; }

  ExpandingMatrix transpose() const { return ExpandingMatrix(entries_.transpose()); }
  const QMat& inverse() const { return inverse_; }

  bool operator==(const ExpandingMatrix& o) const { return entries_ == o.entries_; }

 private:
  IMat entries_;
  QMat inverse_;
  double min_modulus_;
};

// exact R^{-k}, k >= 1
QMat matrix_inverse_power(const ExpandingMatrix& r, int k);

// Certified contraction data for V^{-1}: the smallest k0 <= 64 with
// ||V^{-k0}||_inf < 1, eta = ||V^{-k0}||_inf, and the exact prefix sum
// sum_{j=1..k0} ||V^{-j}||_inf. Splitting k = t*k0 + j bounds every geometric
// tail: sum_{k>=1} ||V^{-k}||_inf <= prefix_sum / (1 - eta).
struct ContractionBound {
  int k0 = 0;
  Rat eta;
  Rat prefix_sum;
  Rat tail_sum() const { return prefix_sum / (Rat(1) - eta); }
};

ContractionBound contraction_bound(const ExpandingMatrix& v);

// Finite list of integer vectors in Z^d containing 0, no duplicates.
class DigitSet {
 public:
  DigitSet(int dim, std::vector<IVec> vectors);

  int dim() const { return dim_; }
  int size() const { return (int)vectors_.size(); }
  const std::vector<IVec>& vectors() const { return vectors_; }
  const IVec& operator[](int i) const { return vectors_[i]; }

  bool operator==(const DigitSet& o) const { return dim_ == o.dim_ && vectors_ == o.vectors_; }

 private:
  int dim_;
  std::vector<IVec> vectors_;
};

// Full-rank rational lattice given by a canonical basis:
// columns of `basis` are the basis vectors, lower-triangular with positive
// diagonal and row entries left of the diagonal reduced mod the diagonal.
class LatticeBasis {
 public:
  // canonicalizes the given generating vectors (columns); requires full rank
  static LatticeBasis from_generators(int dim, const std::vector<QVec>& generators);

  int dim() const { return basis_.rows(); }
  const QMat& basis() const { return basis_; }
  QVec basis_vector(int j) const;

  // exact membership: v in the lattice iff basis^{-1} v is integral
  bool contains(const QVec& v) const;

  // all lattice points p with lo[i] <= p[i] <= hi[i] (exact enumeration)
  std::vector<QVec> points_in_box(const QVec& lo, const QVec& hi) const;

 private:
  explicit LatticeBasis(QMat basis);
  QMat basis_;
  QMat basis_inv_;
};

// basis of Gamma = { gamma : gamma . b in Z for all b in B };
// requires span(B) full rank, else RankDeficient (reports the rank)
LatticeBasis dual_lattice(const DigitSet& b);

// Column-style Hermite normal form of the lattice spanned by the given integer
// columns: lower-triangular, positive diagonal, entries left of the diagonal
// reduced into [0, diag). Returns a d x rank matrix.
IMat column_hnf(const IMat& generators);

class UnimodularMatrix {
 public:
  explicit UnimodularMatrix(IMat entries);
  int dim() const { return entries_.rows(); }
  const IMat& entries() const { return entries_; }
  const IMat& inverse() const { return inverse_; }

 private:
  IMat entries_;
  IMat inverse_;
};

}  // namespace ifspec
