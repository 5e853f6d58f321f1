#include "ifspec/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace ifspec {

QMat to_rational(const IMat& m) {
  QMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = Rat(m(i, j));
  return out;
}

QVec to_rational(const IVec& v) {
  QVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

DVec to_doubles(const QVec& v) {
  DVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

Mat<double> to_doubles(const QMat& m) {
  Mat<double> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

Rat det(const QMat& m) {
  if (!m.square()) fail(Errc::validation_error, "determinant of non-square matrix");
  int n = m.rows();
  QMat a = m;
  Rat d(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != 0) { pivot = r; break; }
    if (pivot < 0) return Rat(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      d = -d;
    }
    d *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      Rat f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return d;
}

Int det(const IMat& m) {
  Rat d = det(to_rational(m));
  return num(d);  // denominator is 1 for integer input
}

QMat inverse(const QMat& m) {
  if (!m.square()) fail(Errc::validation_error, "inverse of non-square matrix");
  int n = m.rows();
  QMat a = m, inv = QMat::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != 0) { pivot = r; break; }
    if (pivot < 0) fail(Errc::singular_system, "matrix is singular");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    Rat p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rat f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

QMat mat_pow(const QMat& m, int k) {
  if (k < 0) fail(Errc::validation_error, "mat_pow needs k >= 0");
  QMat out = QMat::identity(m.rows());
  QMat base = m;
  while (k > 0) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

Rat abs_rat(const Rat& q) { return q < 0 ? -q : q; }

Rat inf_norm(const QMat& m) {
  Rat best(0);
  for (int i = 0; i < m.rows(); ++i) {
    Rat s(0);
    for (int j = 0; j < m.cols(); ++j) s += abs_rat(m(i, j));
    if (s > best) best = s;
  }
  return best;
}

bool lex_less(const QVec& a, const QVec& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

bool is_integer_vec(const QVec& v) {
  for (const auto& q : v)
    if (!is_integer(q)) return false;
  return true;
}

bool is_integer_mat(const QMat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!is_integer(m(i, j))) return false;
  return true;
}

IMat to_integer(const QMat& m) {
  if (!is_integer_mat(m)) fail(Errc::non_integer_result, "expected integer matrix");
  IMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = num(m(i, j));
  return out;
}

IVec to_integer(const QVec& v) {
  IVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!is_integer(v[i])) fail(Errc::non_integer_result, "expected integer vector");
    out[i] = num(v[i]);
  }
  return out;
}

std::vector<double> eigenvalue_moduli(const IMat& m) {
  if (!m.square()) fail(Errc::validation_error, "eigenvalues of non-square matrix");
  int n = m.rows();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = to_double(m(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  std::vector<double> mods(n);
  for (int i = 0; i < n; ++i) mods[i] = std::abs(solver.eigenvalues()[i]);
  std::sort(mods.begin(), mods.end());
  return mods;
}

}  // namespace ifspec
