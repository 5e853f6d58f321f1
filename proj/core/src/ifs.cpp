#include "ifspec/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ifspec/rng.hpp"

namespace ifspec {

AffineIfs::AffineIfs(ExpandingMatrix scaling_, DigitSet digits_)
    : scaling(std::move(scaling_)), digits(std::move(digits_)) {
  if (scaling.dim() != digits.dim())
    fail(Errc::validation_error, "scaling and digit dimensions differ");
}

bool BoundingBox::contains(const QVec& p) const {
  for (size_t i = 0; i < lo.size(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

QVec apply_map(const AffineIfs& ifs, int digit_index, const QVec& x) {
  if (digit_index < 0 || digit_index >= ifs.digits.size())
    fail(Errc::validation_error, "digit index out of range");
  QVec shifted = x + to_rational(ifs.digits[digit_index]);
  return ifs.scaling.inverse() * shifted;
}

DVec apply_map(const AffineIfs& ifs, int digit_index, const DVec& x) {
  if (digit_index < 0 || digit_index >= ifs.digits.size())
    fail(Errc::validation_error, "digit index out of range");
  const auto& b = ifs.digits[digit_index];
  int d = ifs.scaling.dim();
  DVec shifted(d);
  for (int i = 0; i < d; ++i) shifted[i] = x[i] + to_double(b[i]);
  Mat<double> inv = to_doubles(ifs.scaling.inverse());
  DVec out(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i] += inv(i, j) * shifted[j];
  return out;
}

namespace {

Rat max_digit_inf_norm(const DigitSet& d) {
  Rat best(0);
  for (const auto& v : d.vectors())
    for (const auto& x : v) {
      Rat a = abs_rat(Rat(x));
      if (a > best) best = a;
    }
  return best;
}

}  // namespace

AttractorCloud attractor_cloud(const AffineIfs& ifs, int depth, std::uint64_t budget) {
  if (depth < 1) fail(Errc::validation_error, "cloud depth must be >= 1");
  int d = ifs.scaling.dim();
  std::vector<QVec> cloud{QVec(d, Rat(0))};
  for (int k = 0; k < depth; ++k) {
    if (cloud.size() * (std::uint64_t)ifs.digits.size() > budget)
      fail(Errc::budget_exceeded,
           "cloud would exceed budget of " + std::to_string(budget) + " points");
    std::vector<QVec> next;
    next.reserve(cloud.size() * ifs.digits.size());
    for (int b = 0; b < ifs.digits.size(); ++b)
      for (const auto& p : cloud) next.push_back(apply_map(ifs, b, p));
    std::sort(next.begin(), next.end(), lex_less);
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cloud = std::move(next);
  }
  AttractorCloud out;
  out.depth = depth;
  out.points = std::move(cloud);
  // every attractor point is within max_b ||b|| * sum_{k>depth} ||V^{-k}|| of
  // some cloud point (truncate its digit expansion at `depth`)
  ContractionBound c = contraction_bound(ifs.scaling);
  Rat tail = max_digit_inf_norm(ifs.digits) *
             inf_norm(matrix_inverse_power(ifs.scaling, depth)) * c.tail_sum();
  out.hausdorff_bound = to_double(tail);
  return out;
}

BoundingBox bounding_box(const AffineIfs& ifs) {
  int d = ifs.scaling.dim();
  const IMat& v = ifs.scaling.entries();
  // per-coordinate digit hull
  QVec mn(d), mx(d);
  for (int i = 0; i < d; ++i) {
    Rat lo = Rat(ifs.digits[0][i]), hi = lo;
    for (const auto& b : ifs.digits.vectors()) {
      Rat x = Rat(b[i]);
      if (x < lo) lo = x;
      if (x > hi) hi = x;
    }
    mn[i] = lo;
    mx[i] = hi;
  }

  bool diagonal = true;
  for (int i = 0; i < d && diagonal; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && v(i, j) != 0) { diagonal = false; break; }

  BoundingBox box;
  box.lo.assign(d, Rat(0));
  box.hi.assign(d, Rat(0));

  if (diagonal) {
    // exact coordinatewise geometric series sum_{k>=1} s^{-k} d_k
    for (int i = 0; i < d; ++i) {
      Rat s = Rat(v(i, i));
      if (s > 1) {
        box.lo[i] = mn[i] / (s - 1);
        box.hi[i] = mx[i] / (s - 1);
      } else {
        // negative scale: positive coefficients at even k, negative at odd k
        Rat t = Rat(1) / s;
        Rat pos = (t * t) / (Rat(1) - t * t);
        Rat neg = t / (Rat(1) - t * t);
        box.lo[i] = mn[i] * pos + mx[i] * neg;
        box.hi[i] = mx[i] * pos + mn[i] * neg;
      }
    }
    return box;
  }

  // interval geometric series: J = hull of sum_{j=1..k0} V^{-j} [mn,mx],
  // then grow through box <- J + V^{-k0} box until a certified fixed box
  ContractionBound c = contraction_bound(ifs.scaling);
  auto interval_matvec = [d](const QMat& m, const QVec& lo, const QVec& hi) {
    std::pair<QVec, QVec> out{QVec(d, Rat(0)), QVec(d, Rat(0))};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Rat& a = m(i, j);
        if (a >= 0) {
          out.first[i] += a * lo[j];
          out.second[i] += a * hi[j];
        } else {
          out.first[i] += a * hi[j];
          out.second[i] += a * lo[j];
        }
      }
    return out;
  };

  QVec jlo(d, Rat(0)), jhi(d, Rat(0));
  QMat p = QMat::identity(d);
  for (int j = 1; j <= c.k0; ++j) {
    p = p * ifs.scaling.inverse();
    auto [plo, phi] = interval_matvec(p, mn, mx);
    jlo = jlo + plo;
    jhi = jhi + phi;
  }
  QMat vk0 = matrix_inverse_power(ifs.scaling, c.k0);
  QVec blo = jlo, bhi = jhi;
  for (int iter = 0; iter < 128; ++iter) {
    auto [tlo, thi] = interval_matvec(vk0, blo, bhi);
    blo = jlo + tlo;
    bhi = jhi + thi;
  }
  // inflate by the residual geometric tail, then certify exactly
  Rat w(0);
  for (int i = 0; i < d; ++i) {
    if (abs_rat(jlo[i]) > w) w = abs_rat(jlo[i]);
    if (abs_rat(jhi[i]) > w) w = abs_rat(jhi[i]);
  }
  Rat delta = w;  // eta^128 * w / (1 - eta) <= w, generous and certified below
  for (int i = 0; i < d; ++i) {
    blo[i] -= delta;
    bhi[i] += delta;
  }
  auto [clo, chi] = interval_matvec(vk0, blo, bhi);
  for (int i = 0; i < d; ++i) {
    if (jlo[i] + clo[i] < blo[i] || jhi[i] + chi[i] > bhi[i])
      fail(Errc::internal_error, "bounding box certification failed");
  }
  box.lo = blo;
  box.hi = bhi;
  return box;
}

SampleBatch sample_invariant_measure(const AffineIfs& ifs, int depth, int count,
                                     std::uint64_t seed) {
  if (depth < 1 || count < 1) fail(Errc::validation_error, "depth and count must be >= 1");
  int d = ifs.scaling.dim();
  int n = ifs.digits.size();
  Mat<double> inv = to_doubles(ifs.scaling.inverse());
  std::vector<DVec> digits_d;
  for (const auto& b : ifs.digits.vectors()) {
    DVec v(d);
    for (int i = 0; i < d; ++i) v[i] = to_double(b[i]);
    digits_d.push_back(v);
  }

  SampleBatch out;
  out.points.reserve(count);
  constexpr int kChunk = 4096;
  std::vector<int> word(depth);
  for (int base = 0; base < count; base += kChunk) {
    Rng rng(derive_seed(seed, base / kChunk));
    int hi = std::min(count, base + kChunk);
    for (int s = base; s < hi; ++s) {
      for (int k = 0; k < depth; ++k) word[k] = (int)rng.next_below(n);
      DVec x(d, 0.0);
      for (int k = depth - 1; k >= 0; --k) {
        const DVec& b = digits_d[word[k]];
        DVec shifted(d);
        for (int i = 0; i < d; ++i) shifted[i] = x[i] + b[i];
        for (int i = 0; i < d; ++i) {
          double acc = 0;
          for (int j = 0; j < d; ++j) acc += inv(i, j) * shifted[j];
          x[i] = acc;
        }
      }
      out.points.push_back(x);
    }
  }
  ContractionBound c = contraction_bound(ifs.scaling);
  Rat tail = max_digit_inf_norm(ifs.digits) *
             inf_norm(matrix_inverse_power(ifs.scaling, depth)) * c.tail_sum();
  out.tail_radius = to_double(tail);
  return out;
}

namespace {
void write_csv_header(std::ostream& os, size_t d) {
  for (size_t i = 0; i < d; ++i) os << (i ? "," : "") << "x" << (i + 1);
  os << "\n";
}
}  // namespace

void write_points_csv(std::ostream& os, const std::vector<QVec>& pts, int precision) {
  if (pts.empty()) return;
  write_csv_header(os, pts[0].size());
  for (const auto& p : pts) {
    for (size_t i = 0; i < p.size(); ++i)
      os << (i ? "," : "") << rat_to_decimal(p[i], precision);
    os << "\n";
  }
}

void write_points_csv(std::ostream& os, const std::vector<DVec>& pts, int precision) {
  if (pts.empty()) return;
  write_csv_header(os, pts[0].size());
  char buf[64];
  for (const auto& p : pts) {
    for (size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.*f", precision, p[i]);
      os << (i ? "," : "") << buf;
    }
    os << "\n";
  }
}

}  // namespace ifspec
