#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "ifspec/rational.hpp"

namespace ifspec {

// Dense row-major matrix over an exact scalar (Int, Rat) or double.
template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(size_t(rows) * cols, fill) {}
  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = (int)rows.size();
    cols_ = rows_ ? (int)rows.begin()->size() : 0;
    data_.reserve(size_t(rows_) * cols_);
    for (const auto& r : rows) {
      if ((int)r.size() != cols_) fail(Errc::validation_error, "ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <typename U>
  Mat<U> cast() const {
    Mat<U> out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(i, j) = static_cast<U>((*this)(i, j));
    return out;
  }

 private:
  int rows_, cols_;
  std::vector<T> data_;
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;
using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;
using DVec = std::vector<double>;

template <typename T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) fail(Errc::validation_error, "matrix product shape mismatch");
  Mat<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <typename T>
std::vector<T> operator*(const Mat<T>& a, const std::vector<T>& v) {
  if (a.cols() != (int)v.size()) fail(Errc::validation_error, "matrix-vector shape mismatch");
  std::vector<T> out(a.rows(), T(0));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

template <typename T>
std::vector<T> operator+(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <typename T>
std::vector<T> operator-(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <typename T>
std::vector<T> negate(const std::vector<T>& a) {
  std::vector<T> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

QMat to_rational(const IMat& m);
QVec to_rational(const IVec& v);
DVec to_doubles(const QVec& v);
Mat<double> to_doubles(const QMat& m);

// Exact determinant by fraction-free elimination on a rational copy.
Rat det(const QMat& m);
Int det(const IMat& m);

// Exact inverse via Gauss-Jordan; throws SingularSystem if det == 0.
QMat inverse(const QMat& m);

QMat mat_pow(const QMat& m, int k);  // k >= 0

// Matrix infinity norm (max absolute row sum), exact.
Rat inf_norm(const QMat& m);

Rat abs_rat(const Rat& q);

// Lexicographic compare for exact vectors.
bool lex_less(const QVec& a, const QVec& b);

bool is_integer_vec(const QVec& v);
bool is_integer_mat(const QMat& m);
IMat to_integer(const QMat& m);  // asserts integrality
IVec to_integer(const QVec& v);

// Eigenvalue moduli of an integer matrix, computed in floating point (ascending).
std::vector<double> eigenvalue_moduli(const IMat& m);

}  // namespace ifspec
