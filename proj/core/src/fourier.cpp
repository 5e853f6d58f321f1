#include "ifspec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifspec/rng.hpp"

namespace ifspec {

namespace {
double frac_double(double t) { return t - std::floor(t); }
}  // namespace

Cplx mask_eval(const DigitSet& b, const DVec& x) {
  int d = b.dim();
  DVec xf(d);
  for (int i = 0; i < d; ++i) xf[i] = frac_double(x[i]);
  Cplx acc{0.0, 0.0};
  for (const auto& v : b.vectors()) {
    double t = 0;
    for (int i = 0; i < d; ++i) t += to_double(v[i]) * xf[i];
    double a = 2.0 * M_PI * frac_double(t);
    acc += Cplx{std::cos(a), std::sin(a)};
  }
  return acc / (double)b.size();
}

Cplx mask_eval(const DigitSet& b, const QVec& x) {
  Cplx acc{0.0, 0.0};
  for (const auto& v : b.vectors()) {
    Rat dot(0);
    for (size_t i = 0; i < x.size(); ++i) dot += Rat(v[i]) * x[i];
    acc += unit_phase(dot);
  }
  return acc / (double)b.size();
}

double wb_eval(const DigitSet& b, const DVec& x) { return std::norm(mask_eval(b, x)); }
double wb_eval(const DigitSet& b, const QVec& x) { return std::norm(mask_eval(b, x)); }

double partition_residual(const DigitSet& b, const DigitSet& l, const ExpandingMatrix& s,
                          const DVec& x) {
  int d = s.dim();
  Mat<double> s_inv = to_doubles(s.inverse());
  double total = 0;
  for (const auto& lv : l.vectors()) {
    DVec shifted(d);
    for (int i = 0; i < d; ++i) shifted[i] = x[i] + to_double(lv[i]);
    DVec y(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) y[i] += s_inv(i, j) * shifted[j];
    total += wb_eval(b, y);
  }
  return std::abs(total - 1.0);
}

namespace {

inline void sin_cos(double a, double* s, double* c) {
#if defined(__GNUC__) && defined(__linux__)
  ::sincos(a, s, c);
#else
  *s = std::sin(a);
  *c = std::cos(a);
#endif
}

// sin(2 pi u) and cos(2 pi u) for |u| <= 1/2 as truncated Taylor series in
// u^2; the first dropped terms ((2 pi u)^23/23! and (2 pi u)^24/24!) keep the
// absolute error below 2e-11, far inside every certification tolerance, and
// the branch-free polynomials run several times faster than libm sincos
inline void sincos_2pi(double u, double* s, double* c) {
  static constexpr double kS[11] = {
      6.2831853071795862,     -41.341702240399755,    81.605249276075043,
      -76.705859753061361,    42.058693944897634,     -15.094642576822984,
      3.8199525848482803,     -0.71812230177850012,   0.10422916220813978,
      -0.012031585942120619,  0.0011309237482517954};
  static constexpr double kC[12] = {
      1.0,                    -19.739208802178716,    64.939394022668282,
      -85.456817206693714,    60.244641371876639,     -26.426256783374388,
      7.9035363713184648,     -1.7143907110886711,    0.28200596845579101,
      -0.036382841142545641,  0.0037798342006800365,  -0.00032299106720709748};
  double z = u * u;
  double ps = kS[10];
  for (int k = 9; k >= 0; --k) ps = ps * z + kS[k];
  double pc = kC[11];
  for (int k = 10; k >= 0; --k) pc = pc * z + kC[k];
  *s = u * ps;
  *c = pc;
}

constexpr int kStackDim = 16;

}  // namespace

MuHatEvaluator::MuHatEvaluator(const ExpandingMatrix& r, const DigitSet& b, double tail_tol)
    : digits_(b), tail_tol_(tail_tol) {
  if (r.dim() != b.dim()) fail(Errc::validation_error, "matrix and digit dimensions differ");
  ExpandingMatrix s = r.transpose();
  s_inv_ = to_doubles(s.inverse());
  for (const auto& v : b.vectors()) {
    DVec dv(b.dim());
    for (int i = 0; i < b.dim(); ++i) dv[i] = to_double(v[i]);
    digit_doubles_.push_back(dv);
  }
  Rat max_l1(0);
  for (const auto& v : b.vectors()) {
    Rat s1(0);
    for (const auto& c : v) s1 += abs_rat(Rat(c));
    if (s1 > max_l1) max_l1 = s1;
  }
  phase_coeff_ = 2.0 * M_PI * to_double(max_l1);
  ContractionBound cb = contraction_bound(s);
  geo_tail_ = to_double(cb.tail_sum());

  // quadratic tail data for |mu_hat|^2: cos t >= 1 - t^2/2 gives
  // W(z) >= 1 - (2 pi^2 / N^2) sum_{b != b'} (||b - b'||_1 ||z||_inf)^2,
  // so prod_{k>K} W(S^{-k}y) >= 1 - c2 ||S^{-K}y||^2 sum_j ||S^{-j}||^2
  {
    Rat pair_sum(0);
    const auto& vs = b.vectors();
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = 0; j < vs.size(); ++j) {
        if (i == j) continue;
        Rat l1(0);
        for (int k = 0; k < b.dim(); ++k) l1 += abs_rat(Rat(Int(vs[i][k] - vs[j][k])));
        pair_sum += l1 * l1;
      }
    double n = (double)b.size();
    sq_coeff_ = 2.0 * M_PI * M_PI / (n * n) * to_double(pair_sum);
    QMat p = QMat::identity(s.dim());
    Rat prefix2(0);
    for (int k = 1; k <= cb.k0; ++k) {
      p = p * s.inverse();
      Rat nk = inf_norm(p);
      prefix2 += nk * nk;
    }
    geo2_tail_ = to_double(prefix2 / (Rat(1) - cb.eta * cb.eta));
  }

  // hot-path layout: S^{-1} flattened (with a diagonal fast path) and the
  // nonzero digits packed contiguously; the zero digit contributes 1 + 0i
  int d = b.dim();
  diagonal_ = true;
  sinv_flat_.assign((size_t)d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      sinv_flat_[(size_t)i * d + j] = s_inv_(i, j);
      if (i != j && s_inv_(i, j) != 0.0) diagonal_ = false;
    }
  zero_digits_ = 0;
  for (const auto& dv : digit_doubles_) {
    bool zero = true;
    for (double c : dv) zero = zero && c == 0.0;
    if (zero) {
      ++zero_digits_;
    } else {
      for (double c : dv) nonzero_flat_.push_back(c);
    }
  }
}

namespace {
double inf_norm_d(const DVec& v) {
  double m = 0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}
}  // namespace

// one evaluation step on a stack buffer: y <- S^{-1} y, returns ||y||_inf
double MuHatEvaluator::step_(double* y, int d) const {
  double norm = 0;
  if (diagonal_) {
    for (int i = 0; i < d; ++i) {
      y[i] *= sinv_flat_[(size_t)i * d + i];
      norm = std::max(norm, std::abs(y[i]));
    }
  } else {
    double z[kStackDim];
    for (int i = 0; i < d; ++i) {
      double acc = 0;
      const double* row = &sinv_flat_[(size_t)i * d];
      for (int j = 0; j < d; ++j) acc += row[j] * y[j];
      z[i] = acc;
    }
    for (int i = 0; i < d; ++i) {
      y[i] = z[i];
      norm = std::max(norm, std::abs(y[i]));
    }
  }
  return norm;
}

// |m_B(y)|^2 from the packed digit table, phases reduced mod 1
double MuHatEvaluator::wb_(const double* y, int d) const {
  double yf[kStackDim];
  for (int i = 0; i < d; ++i) yf[i] = y[i] - std::floor(y[i]);
  double re = (double)zero_digits_, im = 0.0;
  const double* b = nonzero_flat_.data();
  int n_nonzero = (int)(nonzero_flat_.size() / d);
  for (int v = 0; v < n_nonzero; ++v, b += d) {
    double t = 0;
    for (int i = 0; i < d; ++i) t += b[i] * yf[i];
    double s, c;
    sincos_2pi(t - std::nearbyint(t), &s, &c);
    re += c;
    im += s;
  }
  double n = (double)digits_.size();
  return (re * re + im * im) / (n * n);
}

int MuHatEvaluator::auto_depth(const DVec& x) const {
  int d = (int)x.size();
  if (d > kStackDim) fail(Errc::validation_error, "dimension exceeds evaluator limit");
  double y[kStackDim];
  for (int i = 0; i < d; ++i) y[i] = x[i];
  for (int k = 1; k <= 4096; ++k) {
    double norm = step_(y, d);
    if (phase_coeff_ * norm * geo_tail_ < tail_tol_) return k;
  }
  fail(Errc::internal_error, "product depth 4096 cannot certify the tail");
}

double MuHatEvaluator::tail_bound(const DVec& x, int depth) const {
  int d = (int)x.size();
  if (d > kStackDim) fail(Errc::validation_error, "dimension exceeds evaluator limit");
  double y[kStackDim];
  for (int i = 0; i < d; ++i) y[i] = x[i];
  double norm = inf_norm_d(x);
  for (int k = 0; k < depth; ++k) norm = step_(y, d);
  return phase_coeff_ * norm * geo_tail_;
}

MuHatResult MuHatEvaluator::eval(const DVec& x, int depth) const {
  int d = (int)x.size();
  if (d > kStackDim) fail(Errc::validation_error, "dimension exceeds evaluator limit");
  bool automatic = depth <= 0;
  double y[kStackDim];
  for (int i = 0; i < d; ++i) y[i] = x[i];
  Cplx prod{1.0, 0.0};
  int k = 0;
  double norm = inf_norm_d(x);
  while (automatic ? (phase_coeff_ * norm * geo_tail_ >= tail_tol_ || k == 0) : k < depth) {
    if (++k > 4096) fail(Errc::internal_error, "product depth 4096 cannot certify the tail");
    norm = step_(y, d);
    DVec yv(y, y + d);
    prod *= mask_eval(digits_, yv);
  }
  return {prod, k, phase_coeff_ * norm * geo_tail_};
}

double MuHatEvaluator::eval_sq(const DVec& x, int depth, double floor_sq) const {
  int d = (int)x.size();
  if (d > kStackDim) fail(Errc::validation_error, "dimension exceeds evaluator limit");
  bool automatic = depth <= 0;
  double y[kStackDim];
  for (int i = 0; i < d; ++i) y[i] = x[i];
  double sq = 1.0;
  int k = 0;
  double norm = inf_norm_d(x);
  // the truncated tail multiplies sq by a factor in [1 - eps, 1] with
  // eps = sq_coeff_ * norm^2 * geo2_tail_, so stop once eps < tail_tol_ and
  // split the certified range down the middle; the residual relative error
  // is then at most tail_tol_ / 2
  while (automatic ? (sq_coeff_ * norm * norm * geo2_tail_ >= tail_tol_ || k == 0) : k < depth) {
    if (++k > 4096) fail(Errc::internal_error, "product depth 4096 cannot certify the tail");
    norm = step_(y, d);
    sq *= wb_(y, d);
    if (sq < floor_sq) return sq;
  }
  if (automatic) sq *= 1.0 - 0.5 * sq_coeff_ * norm * norm * geo2_tail_;
  return sq;
}

MuHatResult mu_hat(const ExpandingMatrix& r, const DigitSet& b, const DVec& x,
                   int product_depth, double tail_tol) {
  return MuHatEvaluator(r, b, tail_tol).eval(x, product_depth);
}

DefectResult orthogonality_defect(const ExpandingMatrix& r, const DigitSet& b,
                                  const SpectrumApprox& lambda, double radius,
                                  std::size_t pair_budget) {
  MuHatEvaluator ev(r, b);
  DefectResult out;
  const auto& el = lambda.elements;
  for (size_t i = 0; i < el.size(); ++i)
    for (size_t j = i + 1; j < el.size(); ++j) {
      DVec diff(el[i].size());
      double norm = 0;
      for (size_t k = 0; k < diff.size(); ++k) {
        diff[k] = to_double(el[i][k] - el[j][k]);
        norm = std::max(norm, std::abs(diff[k]));
      }
      if (norm > radius) continue;
      if (++out.pairs > pair_budget)
        fail(Errc::budget_exceeded, "orthogonality pair window exceeds budget");
      out.defect = std::max(out.defect, std::abs(ev.eval(diff).value));
    }
  return out;
}

namespace {

// row-major int64 image of a rational element list; fails on any fractional
// entry or anything at risk of 64-bit overflow downstream
bool flatten_int_rows(const std::vector<QVec>& rows, int d, std::vector<long long>* out) {
  constexpr long long kMax = std::numeric_limits<long long>::max() / 4;
  out->clear();
  out->reserve(rows.size() * (size_t)d);
  for (const auto& v : rows) {
    if ((int)v.size() != d) return false;
    for (const auto& q : v) {
      if (!is_integer(q)) return false;
      Int n = num(q);
      if (n > Int(kMax) || n < Int(-kMax)) return false;
      out->push_back(n.convert_to<long long>());
    }
  }
  return true;
}

}  // namespace

CertificationReport parseval_certify(const ExpandingMatrix& r, const DigitSet& b,
                                     const SpectrumGenerator& gen,
                                     const std::vector<DVec>& grid, int spectrum_depth,
                                     int product_depth, double certify_tol) {
  // per-term certified tail window of 4e-7 (the evaluator reports the window
  // midpoint, so each term carries at most 2e-7 relative error); the
  // aggregate bias stays at ~2e-7 times the Parseval sum, far below any
  // meaningful certify_tol
  constexpr double kTermTailTol = 4e-7;
  MuHatEvaluator ev(r, b, kTermTailTol);
  CertificationReport rep;
  rep.grid = grid;
  rep.spectrum_depth = spectrum_depth;
  rep.product_depth = product_depth;
  rep.tol = certify_tol;
  rep.partial_sums.assign(grid.size(), {});

  std::vector<long double> sums(grid.size(), 0.0L);
  // once a term's partial product drops below this floor the remaining
  // factors (all <= 1) are skipped; each skip overestimates the term by at
  // most the floor, so the sum's total bias stays under #terms * 1e-15
  constexpr double kTermFloor = 1e-15;
  const int d = b.dim();
  DVec lam_d(d), xl(d);
  auto accumulate_term = [&](size_t g) {
    sums[g] += ev.eval_sq(xl, product_depth, kTermFloor);
    if (product_depth > 0)
      rep.product_tail_bound = std::max(rep.product_tail_bound, ev.tail_bound(xl, product_depth));
  };

  // set bookkeeping runs on flat int64 rows while every element is integral
  // (the common case for lattice spectra); the first fractional element
  // switches the remaining depths to exact rationals
  bool ints = true;
  std::vector<long long> prev_flat;
  std::vector<QVec> prev;

  for (int n = 0; n <= spectrum_depth; ++n) {
    SpectrumApprox sn = gen(n);
    std::vector<long long> flat;
    if (ints && !flatten_int_rows(sn.elements, d, &flat)) {
      ints = false;
      for (size_t e = 0; e * (size_t)d < prev_flat.size(); ++e) {
        QVec v(d);
        for (int i = 0; i < d; ++i) v[i] = Rat(prev_flat[e * (size_t)d + i]);
        prev.push_back(std::move(v));
      }
      prev_flat.clear();
    }

    if (ints) {
      size_t count = flat.size() / (size_t)d;
      std::vector<unsigned> idx(count);
      for (size_t i = 0; i < count; ++i) idx[i] = (unsigned)i;
      std::sort(idx.begin(), idx.end(), [&](unsigned a, unsigned c) {
        const long long* pa = &flat[(size_t)a * d];
        const long long* pc = &flat[(size_t)c * d];
        for (int i = 0; i < d; ++i)
          if (pa[i] != pc[i]) return pa[i] < pc[i];
        return false;
      });
      std::vector<long long> sorted;
      sorted.reserve(flat.size());
      size_t kept = 0;
      for (size_t t = 0; t < count; ++t) {
        const long long* row = &flat[(size_t)idx[t] * d];
        if (kept > 0 && std::equal(row, row + d, &sorted[(kept - 1) * (size_t)d])) {
          ++rep.duplicate_count;
          continue;
        }
        sorted.insert(sorted.end(), row, row + d);
        ++kept;
      }
      // one merge walk over the sorted rows checks nesting and finds the
      // fresh elements to accumulate
      auto row_less = [d](const long long* a, const long long* c) {
        for (int i = 0; i < d; ++i)
          if (a[i] != c[i]) return a[i] < c[i];
        return false;
      };
      size_t pi = 0, pc = prev_flat.size() / (size_t)d;
      for (size_t e = 0; e < kept; ++e) {
        const long long* row = &sorted[e * (size_t)d];
        while (pi < pc && row_less(&prev_flat[pi * (size_t)d], row)) {
          rep.nested = false;
          ++pi;
        }
        if (pi < pc && std::equal(row, row + d, &prev_flat[pi * (size_t)d])) {
          ++pi;
          continue;
        }
        for (int k = 0; k < d; ++k) lam_d[k] = (double)row[k];
        for (size_t g = 0; g < grid.size(); ++g) {
          for (int k = 0; k < d; ++k) xl[k] = grid[g][k] + lam_d[k];
          accumulate_term(g);
        }
      }
      if (pi < pc) rep.nested = false;
      rep.spectrum_sizes.push_back(kept);
      prev_flat.swap(sorted);
    } else {
      std::sort(sn.elements.begin(), sn.elements.end(), lex_less);
      auto dup_end = std::unique(sn.elements.begin(), sn.elements.end());
      rep.duplicate_count += sn.elements.end() - dup_end;
      sn.elements.erase(dup_end, sn.elements.end());

      rep.nested = rep.nested && std::includes(sn.elements.begin(), sn.elements.end(),
                                               prev.begin(), prev.end(), lex_less);
      std::vector<QVec> fresh;
      std::set_difference(sn.elements.begin(), sn.elements.end(), prev.begin(), prev.end(),
                          std::back_inserter(fresh), lex_less);
      for (const auto& lam : fresh) {
        for (size_t k = 0; k < lam.size(); ++k) lam_d[k] = to_double(lam[k]);
        for (size_t g = 0; g < grid.size(); ++g) {
          for (size_t k = 0; k < lam.size(); ++k) xl[k] = grid[g][k] + lam_d[k];
          accumulate_term(g);
        }
      }
      rep.spectrum_sizes.push_back(sn.elements.size());
      prev = std::move(sn.elements);
    }

    for (size_t g = 0; g < grid.size(); ++g) {
      double s = (double)sums[g];
      if (!rep.partial_sums[g].empty() && s < rep.partial_sums[g].back()) rep.monotone = false;
      rep.partial_sums[g].push_back(s);
    }
  }

  if (product_depth <= 0 && !grid.empty()) {
    // auto mode reports the midpoint of each term's certified tail window
    rep.product_tail_bound = 0.5 * kTermTailTol;
  }
  for (size_t g = 0; g < grid.size(); ++g)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(rep.partial_sums[g].back() - 1.0));
  rep.pass = rep.max_deviation < certify_tol;
  return rep;
}

std::vector<DVec> default_grid(const AffineIfs& ifs, int count, std::uint64_t seed) {
  BoundingBox box = bounding_box(ifs);
  int d = ifs.scaling.dim();
  std::vector<DVec> grid{DVec(d, 0.0)};
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    DVec p(d);
    for (int j = 0; j < d; ++j) {
      double lo = to_double(box.lo[j]), hi = to_double(box.hi[j]);
      p[j] = lo + rng.next_double() * (hi - lo);
    }
    grid.push_back(p);
  }
  return grid;
}

}  // namespace ifspec
