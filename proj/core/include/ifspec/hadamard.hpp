#pragma once

#include <complex>
#include <vector>

#include "ifspec/lattice.hpp"
#include "ifspec/linalg.hpp"

namespace ifspec {

using Cplx = std::complex<double>;
using CMat = Mat<Cplx>;

// e^{2 pi i t} for exact rational t, snapped to exact values at quarter turns
// so matrices built from quarter phases have entries that are exactly +-1, +-i
Cplx unit_phase(const Rat& t);

// a scaling matrix with two digit sets of equal size; `defect` caches the
// max-norm distance of H*H from the identity for H = hadamard_matrix(...)
struct HadamardTriple {
  ExpandingMatrix scaling;  // R; the dual side uses S = R^T
  DigitSet b_digits;
  DigitSet l_digits;
  double defect = 0.0;

  HadamardTriple(ExpandingMatrix scaling_, DigitSet b, DigitSet l);
  int dim() const { return scaling.dim(); }
  int size() const { return b_digits.size(); }
  ExpandingMatrix dual() const { return scaling.transpose(); }
};

// N x N matrix with entry (b,l) = N^{-1/2} e^{2 pi i (R^{-1}b).l},
// rows ordered as B, columns as L
CMat hadamard_matrix(const ExpandingMatrix& r, const DigitSet& b, const DigitSet& l);

struct HadamardCheck {
  bool accepted = false;
  double defect = 0.0;  // max-norm of H*H - I
};

HadamardCheck is_hadamard_triple(const ExpandingMatrix& r, const DigitSet& b,
                                 const DigitSet& l, double tol = 1e-12);

// true iff all pairwise differences l - l' lie outside S Z^d
bool check_incongruence(const DigitSet& l, const ExpandingMatrix& s);

// canonical representative of x modulo the lattice spanned by the columns of
// the (lower-triangular, positive-diagonal) Hermite form h
IVec reduce_mod_lattice(const IMat& h, const IVec& x);

// all L with 0 in L, #L = #B, pairwise-distinct residues mod S Z^d, and
// unitarity defect < tol; candidates are one representative per residue class
// (|l_i| <= residue_bound when positive, else the Hermite fundamental domain)
std::vector<DigitSet> search_completions(const ExpandingMatrix& r, const DigitSet& b,
                                         int residue_bound = 0, double tol = 1e-12,
                                         std::uint64_t budget = 1u << 20);

// (M R M^{-1}, M B, (M^T)^{-1} L); defect is recomputed on the result
HadamardTriple conjugate_triple(const UnimodularMatrix& m, const HadamardTriple& t);

}  // namespace ifspec
