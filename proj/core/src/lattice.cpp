#include "ifspec/lattice.hpp"

#include <numeric>
#include <set>

namespace ifspec {

ExpandingCheck is_expanding(const IMat& m, double margin) {
  auto mods = eigenvalue_moduli(m);
  ExpandingCheck out;
  out.min_modulus = mods.empty() ? 0.0 : mods.front();
  out.expanding = !mods.empty() && out.min_modulus > 1.0 + margin;
  return out;
}

ExpandingMatrix::ExpandingMatrix(IMat entries) : entries_(std::move(entries)) {
  if (!entries_.square() || entries_.rows() == 0)
    fail(Errc::validation_error, "scaling matrix must be square and nonempty");
  auto chk = is_expanding(entries_);
  if (!chk.expanding)
    fail(Errc::not_expanding,
         "matrix is not expanding (min eigenvalue modulus " + std::to_string(chk.min_modulus) + ")");
  min_modulus_ = chk.min_modulus;
  inverse_ = ifspec::inverse(to_rational(entries_));
}

QMat matrix_inverse_power(const ExpandingMatrix& r, int k) {
  if (k < 1) fail(Errc::validation_error, "matrix_inverse_power needs k >= 1");
  return mat_pow(r.inverse(), k);
}

DigitSet::DigitSet(int dim, std::vector<IVec> vectors) : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ < 1) fail(Errc::validation_error, "digit set dimension must be positive");
  if (vectors_.empty()) fail(Errc::validation_error, "digit set must be nonempty");
  bool has_zero = false;
  std::set<IVec> seen;
  for (const auto& v : vectors_) {
    if ((int)v.size() != dim_) fail(Errc::validation_error, "digit dimension mismatch");
    if (!seen.insert(v).second) fail(Errc::validation_error, "duplicate digit vector");
    has_zero |= std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
  }
  if (!has_zero) fail(Errc::validation_error, "0 must belong to the digit set");
}

namespace {

// gcd-based column elimination for the Hermite form
void col_axpy(IMat& m, int dst, int src, const Int& f) {
  for (int i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

void col_swap(IMat& m, int a, int b) {
  for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void col_negate(IMat& m, int a) {
  for (int i = 0; i < m.rows(); ++i) m(i, a) = -m(i, a);
}

}  // namespace

IMat column_hnf(const IMat& generators) {
  IMat m = generators;
  int rows = m.rows(), cols = m.cols();
  int lead = 0;  // next column to fix
  for (int row = 0; row < rows && lead < cols; ++row) {
    // reduce columns lead..cols-1 so at most one has a nonzero in this row
    while (true) {
      int nonzero = -1, count = 0;
      Int best;
      for (int j = lead; j < cols; ++j) {
        if (m(row, j) != 0) {
          ++count;
          if (nonzero < 0 || abs(m(row, j)) < abs(best)) {
            nonzero = j;
            best = m(row, j);
          }
        }
      }
      if (count == 0) { nonzero = -1; }
      if (count <= 1) {
        if (count == 1) {
          col_swap(m, lead, nonzero);
          if (m(row, lead) < 0) col_negate(m, lead);
          // reduce earlier columns of this row into [0, pivot)
          for (int j = 0; j < lead; ++j) {
            Int q = m(row, j) / m(row, lead);
            if (m(row, j) - q * m(row, lead) < 0) q -= 1;
            if (q != 0) col_axpy(m, j, lead, -q);
          }
          ++lead;
        }
        break;
      }
      // eliminate all other columns against the smallest pivot
      for (int j = lead; j < cols; ++j) {
        if (j == nonzero || m(row, j) == 0) continue;
        Int q = m(row, j) / m(row, nonzero);
        col_axpy(m, j, nonzero, -q);
      }
    }
  }
  // drop zero columns beyond the rank
  IMat out(rows, lead);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lead; ++j) out(i, j) = m(i, j);
  return out;
}

LatticeBasis::LatticeBasis(QMat basis) : basis_(std::move(basis)) {
  basis_inv_ = inverse(basis_);
}

QVec LatticeBasis::basis_vector(int j) const {
  QVec v(basis_.rows());
  for (int i = 0; i < basis_.rows(); ++i) v[i] = basis_(i, j);
  return v;
}

LatticeBasis LatticeBasis::from_generators(int dim, const std::vector<QVec>& generators) {
  if (generators.empty()) fail(Errc::rank_deficient, "no generators (rank 0)");
  // common denominator -> integer HNF -> rescale back
  Int q(1);
  for (const auto& g : generators)
    for (const auto& x : g) q = boost::multiprecision::lcm(q, den(x));
  IMat m(dim, (int)generators.size());
  for (int j = 0; j < (int)generators.size(); ++j) {
    if ((int)generators[j].size() != dim) fail(Errc::validation_error, "generator dimension mismatch");
    for (int i = 0; i < dim; ++i) {
      Rat scaled = generators[j][i] * q;
      m(i, j) = num(scaled);
    }
  }
  IMat h = column_hnf(m);
  if (h.cols() != dim)
    fail(Errc::rank_deficient, "generators span rank " + std::to_string(h.cols()) +
                                   " < dimension " + std::to_string(dim));
  QMat basis(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) basis(i, j) = Rat(h(i, j), q);
  return LatticeBasis(std::move(basis));
}

bool LatticeBasis::contains(const QVec& v) const {
  QVec c = basis_inv_ * v;
  return is_integer_vec(c);
}

std::vector<QVec> LatticeBasis::points_in_box(const QVec& lo, const QVec& hi) const {
  int d = dim();
  if ((int)lo.size() != d || (int)hi.size() != d)
    fail(Errc::validation_error, "box dimension mismatch");
  std::vector<QVec> out;
  QVec coeff(d, Rat(0));
  QVec point(d, Rat(0));
  // basis is lower-triangular: coordinate i depends on coefficients 0..i only,
  // so coefficient ranges can be solved front to back
  std::vector<Int> c(d);
  auto rec = [&](auto&& self, int i, QVec partial) -> void {
    if (i == d) {
      out.push_back(partial);
      return;
    }
    // partial[i] currently holds sum_{j<i} c_j basis(i,j)
    Rat diag = basis_(i, i);
    Int cmin = rat_ceil((lo[i] - partial[i]) / diag);
    Int cmax = rat_floor((hi[i] - partial[i]) / diag);
    for (Int ci = cmin; ci <= cmax; ++ci) {
      QVec next = partial;
      for (int row = i; row < d; ++row) next[row] += Rat(ci) * basis_(row, i);
      self(self, i + 1, std::move(next));
    }
  };
  rec(rec, 0, QVec(d, Rat(0)));
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

LatticeBasis dual_lattice(const DigitSet& b) {
  int d = b.dim();
  // lattice G spanned by B (integer HNF), then Gamma = G^{-T} Z^d
  IMat gens(d, b.size());
  for (int j = 0; j < b.size(); ++j)
    for (int i = 0; i < d; ++i) gens(i, j) = b[j][i];
  IMat h = column_hnf(gens);
  if (h.cols() != d)
    fail(Errc::rank_deficient, "digit set spans rank " + std::to_string(h.cols()) +
                                   " < dimension " + std::to_string(d));
  QMat ginv_t = inverse(to_rational(h)).transpose();
  std::vector<QVec> cols(d, QVec(d));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) cols[j][i] = ginv_t(i, j);
  return LatticeBasis::from_generators(d, cols);
}

ContractionBound contraction_bound(const ExpandingMatrix& v) {
  ContractionBound out;
  QMat p = QMat::identity(v.dim());
  for (int k = 1; k <= 64; ++k) {
    p = p * v.inverse();
    Rat n = inf_norm(p);
    out.prefix_sum += n;
    if (n < 1) {
      out.k0 = k;
      out.eta = n;
      return out;
    }
  }
  fail(Errc::internal_error, "no k <= 64 with ||V^-k|| < 1; matrix barely expanding");
}

UnimodularMatrix::UnimodularMatrix(IMat entries) : entries_(std::move(entries)) {
  if (!entries_.square()) fail(Errc::validation_error, "unimodular matrix must be square");
  Int d = det(entries_);
  if (d != 1 && d != -1)
    fail(Errc::non_unimodular, "determinant is " + d.str() + ", need +-1");
  inverse_ = to_integer(ifspec::inverse(to_rational(entries_)));
}

}  // namespace ifspec
