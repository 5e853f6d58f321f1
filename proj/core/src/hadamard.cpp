#include "ifspec/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace ifspec {

Cplx unit_phase(const Rat& t) {
  Rat f = rat_frac(t);  // in [0,1)
  if (f == 0) return {1.0, 0.0};
  if (f == Rat(1, 4)) return {0.0, 1.0};
  if (f == Rat(1, 2)) return {-1.0, 0.0};
  if (f == Rat(3, 4)) return {0.0, -1.0};
  double a = 2.0 * M_PI * to_double(f);
  return {std::cos(a), std::sin(a)};
}

HadamardTriple::HadamardTriple(ExpandingMatrix scaling_, DigitSet b, DigitSet l)
    : scaling(std::move(scaling_)), b_digits(std::move(b)), l_digits(std::move(l)) {
  if (scaling.dim() != b_digits.dim() || scaling.dim() != l_digits.dim())
    fail(Errc::validation_error, "digit sets must match the matrix dimension");
  if (b_digits.size() != l_digits.size())
    fail(Errc::validation_error, "digit sets must have equal cardinality (#B = #L)");
  defect = is_hadamard_triple(scaling, b_digits, l_digits).defect;
}

CMat hadamard_matrix(const ExpandingMatrix& r, const DigitSet& b, const DigitSet& l) {
  if (b.size() != l.size())
    fail(Errc::validation_error, "digit sets must have equal cardinality (#B = #L)");
  int n = b.size();
  double scale = 1.0 / std::sqrt((double)n);
  CMat h(n, n);
  for (int i = 0; i < n; ++i) {
    QVec rb = r.inverse() * to_rational(b[i]);
    for (int j = 0; j < n; ++j) {
      Rat dot(0);
      for (size_t k = 0; k < rb.size(); ++k) dot += rb[k] * Rat(l[j][k]);
      h(i, j) = scale * unit_phase(dot);
    }
  }
  return h;
}

HadamardCheck is_hadamard_triple(const ExpandingMatrix& r, const DigitSet& b,
                                 const DigitSet& l, double tol) {
  CMat h = hadamard_matrix(r, b, l);
  int n = h.rows();
  double defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Cplx acc{0.0, 0.0};
      for (int k = 0; k < n; ++k) acc += std::conj(h(k, i)) * h(k, j);
      if (i == j) acc -= 1.0;
      defect = std::max(defect, std::abs(acc));
    }
  return {defect < tol, defect};
}

bool check_incongruence(const DigitSet& l, const ExpandingMatrix& s) {
  for (int i = 0; i < l.size(); ++i)
    for (int j = i + 1; j < l.size(); ++j) {
      QVec diff = to_rational(l[i]) + negate(to_rational(l[j]));
      if (is_integer_vec(s.inverse() * diff)) return false;
    }
  return true;
}

IVec reduce_mod_lattice(const IMat& h, const IVec& x) {
  int d = h.rows();
  IVec rem = x;
  for (int i = 0; i < d; ++i) {
    // h is lower triangular with positive diagonal: clear coordinate i using
    // column i, flooring so the residue lands in [0, h(i,i))
    Int q = rem[i] >= 0 ? Int(rem[i] / h(i, i))
                        : Int(-((-rem[i] + h(i, i) - 1) / h(i, i)));
    for (int k = 0; k < d; ++k) rem[k] -= q * h(k, i);
  }
  return rem;
}

std::vector<DigitSet> search_completions(const ExpandingMatrix& r, const DigitSet& b,
                                         int residue_bound, double tol,
                                         std::uint64_t budget) {
  int d = r.dim();
  int n = b.size();
  IMat s = r.entries().transpose();
  IMat h = column_hnf(s);
  if (h.cols() != d) fail(Errc::internal_error, "nonsingular S must have full Hermite rank");

  // candidate residues: one representative per class of Z^d / S Z^d
  std::vector<IVec> residues;
  if (residue_bound > 0) {
    std::vector<IVec> box;
    IVec cur(d, Int(0));
    std::function<void(int)> scan = [&](int i) {
      if (i == d) { box.push_back(cur); return; }
      for (Int v = -residue_bound; v <= residue_bound; ++v) {
        cur[i] = v;
        scan(i + 1);
        if (box.size() > budget) fail(Errc::budget_exceeded, "completion candidate box too large");
      }
    };
    scan(0);
    std::map<std::vector<Int>, IVec> reps;
    for (const auto& v : box) {
      IVec key = reduce_mod_lattice(h, v);
      std::vector<Int> k(key.begin(), key.end());
      auto it = reps.find(k);
      if (it == reps.end() || lex_less(to_rational(v), to_rational(it->second)))
        reps.insert_or_assign(k, v);
    }
    reps.insert_or_assign(std::vector<Int>(d, Int(0)), IVec(d, Int(0)));
    for (auto& [k, v] : reps) residues.push_back(v);
  } else {
    IVec cur(d, Int(0));
    std::function<void(int)> scan = [&](int i) {
      if (i == d) { residues.push_back(cur); return; }
      for (Int v = 0; v < h(i, i); ++v) {
        cur[i] = v;
        scan(i + 1);
        if (residues.size() > budget)
          fail(Errc::budget_exceeded, "fundamental domain exceeds the search budget");
      }
    };
    scan(0);
  }
  std::sort(residues.begin(), residues.end(),
            [](const IVec& a, const IVec& b2) { return lex_less(to_rational(a), to_rational(b2)); });

  // compatibility: l and l' can share an L iff the column inner product
  // sum_b e^{2 pi i (R^{-1}b).(l-l')} vanishes
  std::vector<QVec> rb_all;
  for (int bi = 0; bi < n; ++bi) rb_all.push_back(r.inverse() * to_rational(b[bi]));
  auto columns_orthogonal = [&](const IVec& li, const IVec& lj) {
    Cplx acc{0.0, 0.0};
    for (int bi = 0; bi < n; ++bi) {
      Rat dot(0);
      for (int k = 0; k < d; ++k) dot += rb_all[bi][k] * Rat(li[k] - lj[k]);
      acc += unit_phase(dot);
    }
    return std::abs(acc) < 1e-9 * n;
  };

  size_t m = residues.size();
  std::vector<std::vector<char>> compat(m, std::vector<char>(m, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      compat[i][j] = compat[j][i] = columns_orthogonal(residues[i], residues[j]) ? 1 : 0;

  // zero vector's residue index (the class of 0 is 0 itself)
  size_t zero_idx = m;
  for (size_t i = 0; i < m; ++i) {
    bool z = true;
    IVec red = reduce_mod_lattice(h, residues[i]);
    for (const auto& c : red) z = z && c == 0;
    if (z) { zero_idx = i; break; }
  }
  if (zero_idx == m) fail(Errc::internal_error, "zero residue missing from candidate set");

  std::vector<DigitSet> out;
  std::vector<size_t> clique{zero_idx};
  std::uint64_t nodes = 0;
  std::function<void(size_t)> extend = [&](size_t start) {
    if (++nodes > budget) fail(Errc::budget_exceeded, "completion clique search budget exhausted");
    if ((int)clique.size() == n) {
      std::vector<IVec> vecs;
      for (size_t idx : clique) vecs.push_back(residues[idx]);
      std::sort(vecs.begin(), vecs.end(),
                [](const IVec& a, const IVec& b2) { return lex_less(to_rational(a), to_rational(b2)); });
      DigitSet cand(d, vecs);
      if (is_hadamard_triple(r, b, cand, tol).accepted) out.push_back(cand);
      return;
    }
    for (size_t j = start; j < m; ++j) {
      if (j == zero_idx) continue;
      bool ok = true;
      for (size_t idx : clique) ok = ok && compat[idx][j];
      if (!ok) continue;
      clique.push_back(j);
      extend(j + 1);
      clique.pop_back();
    }
  };
  if (n == 1) {
    out.emplace_back(d, std::vector<IVec>{IVec(d, Int(0))});
    return out;
  }
  extend(0);
  return out;
}

HadamardTriple conjugate_triple(const UnimodularMatrix& m, const HadamardTriple& t) {
  int d = t.dim();
  if (m.entries().rows() != d)
    fail(Errc::validation_error, "conjugation matrix dimension mismatch");
  IMat r2 = m.entries() * t.scaling.entries() * m.inverse();
  IMat mt_inv = m.inverse().transpose();
  std::vector<IVec> b2, l2;
  for (const auto& v : t.b_digits.vectors()) b2.push_back(m.entries() * v);
  for (const auto& v : t.l_digits.vectors()) l2.push_back(mt_inv * v);
  return HadamardTriple(ExpandingMatrix(r2), DigitSet(d, b2), DigitSet(d, l2));
}

}  // namespace ifspec
