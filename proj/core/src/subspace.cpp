#include "ifspec/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ifspec/ifs.hpp"
#include "ifspec/rng.hpp"

namespace ifspec {

bool BlockDecomposition::fibers_equal() const {
  for (size_t i = 1; i < fibers.size(); ++i)
    if (fibers[i].size() != fibers[0].size()) return false;
  return true;
}

BlockDecomposition decompose(const HadamardTriple& t, int r) {
  int d = t.dim();
  if (r < 1 || r >= d) fail(Errc::validation_error, "subspace rank must satisfy 1 <= r < d");
  IMat s = t.scaling.entries().transpose();
  for (int i = r; i < d; ++i)
    for (int j = 0; j < r; ++j)
      if (s(i, j) != 0)
        fail(Errc::not_invariant,
             "R^" + std::to_string(r) + " x {0} is not S-invariant: S(" + std::to_string(i) +
                 "," + std::to_string(j) + ") != 0");

  BlockDecomposition dec{.dim = d, .rank = r, .s1 = IMat(r, r), .s2 = IMat(d - r, d - r),
                         .c = IMat(r, d - r), .a1 = IMat(r, r), .a2 = IMat(d - r, d - r),
                         .cstar = IMat(d - r, r), .proj_digits = {}, .fibers = {},
                         .b_digits = t.b_digits, .l_digits = t.l_digits};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) dec.s1(i, j) = s(i, j);
  for (int i = 0; i < r; ++i)
    for (int j = r; j < d; ++j) dec.c(i, j - r) = s(i, j);
  for (int i = r; i < d; ++i)
    for (int j = r; j < d; ++j) dec.s2(i - r, j - r) = s(i, j);
  dec.a1 = dec.s1.transpose();
  dec.a2 = dec.s2.transpose();
  dec.cstar = dec.c.transpose();

  for (const auto& b : t.b_digits.vectors()) {
    IVec first(b.begin(), b.begin() + r);
    IVec second(b.begin() + r, b.end());
    auto it = std::find(dec.proj_digits.begin(), dec.proj_digits.end(), first);
    if (it == dec.proj_digits.end()) {
      dec.proj_digits.push_back(first);
      dec.fibers.push_back({second});
    } else {
      dec.fibers[it - dec.proj_digits.begin()].push_back(second);
    }
  }
  return dec;
}

QMat fiber_dk(const BlockDecomposition& dec, int k) {
  if (k < 1) fail(Errc::validation_error, "fiber series index must be >= 1");
  ExpandingMatrix a1(dec.a1), a2(dec.a2);
  QMat cs = to_rational(dec.cstar);
  QMat out(dec.dim - dec.rank, dec.rank);
  for (int l = 0; l <= k - 1; ++l) {
    QMat term = matrix_inverse_power(a2, l + 1) * cs * matrix_inverse_power(a1, k - l);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j) out(i, j) -= term(i, j);
  }
  return out;
}

QVec fiber_g(const BlockDecomposition& dec, const std::vector<int>& prefix, int depth) {
  if ((int)prefix.size() < depth)
    fail(Errc::validation_error, "digit prefix shorter than the requested depth");
  QVec acc(dec.dim - dec.rank, Rat(0));
  for (int k = 1; k <= depth; ++k) {
    int i = prefix[k - 1];
    if (i < 0 || i >= dec.n1()) fail(Errc::validation_error, "projected digit index out of range");
    acc = acc + fiber_dk(dec, k) * to_rational(dec.proj_digits[i]);
  }
  return acc;
}

Cplx fiber_mask(const BlockDecomposition& dec, int i, const DVec& y) {
  const auto& etas = dec.fibers[i];
  Cplx acc{0.0, 0.0};
  for (const auto& eta : etas) {
    double t = 0;
    for (size_t k = 0; k < y.size(); ++k) t += to_double(eta[k]) * (y[k] - std::floor(y[k]));
    double a = 2.0 * M_PI * (t - std::floor(t));
    acc += Cplx{std::cos(a), std::sin(a)};
  }
  return acc / (double)etas.size();
}

Cplx fiber_mask(const BlockDecomposition& dec, int i, const QVec& y) {
  const auto& etas = dec.fibers[i];
  Cplx acc{0.0, 0.0};
  for (const auto& eta : etas) {
    Rat dot(0);
    for (size_t k = 0; k < y.size(); ++k) dot += Rat(eta[k]) * y[k];
    acc += unit_phase(dot);
  }
  return acc / (double)etas.size();
}

Cplx fiber_mu_hat(const BlockDecomposition& dec, const std::vector<int>& prefix,
                  const DVec& y, int depth) {
  if ((int)prefix.size() < depth)
    fail(Errc::validation_error, "digit prefix shorter than the requested depth");
  ExpandingMatrix s2(dec.s2);
  Mat<double> s2_inv = to_doubles(s2.inverse());
  int m = dec.dim - dec.rank;
  DVec cur = y;
  Cplx prod{1.0, 0.0};
  for (int k = 1; k <= depth; ++k) {
    DVec z(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) z[i] += s2_inv(i, j) * cur[j];
    cur = z;
    prod *= fiber_mask(dec, prefix[k - 1], cur);
  }
  return prod;
}

double w_tilde(const BlockDecomposition& dec, const DVec& y) {
  double acc = 0;
  for (int i = 0; i < dec.n1(); ++i) acc += std::norm(fiber_mask(dec, i, y));
  return acc / dec.n1();
}

double f_product(const BlockDecomposition& dec, const DVec& y, int depth) {
  if (!dec.fibers_equal())
    fail(Errc::unequal_fibers, "F(y) requires equal fiber cardinalities N2(i)");
  ExpandingMatrix s2(dec.s2);
  Mat<double> s2_inv = to_doubles(s2.inverse());
  int m = dec.dim - dec.rank;
  DVec cur = y;
  double prod = 1.0;
  for (int k = 1; k <= depth; ++k) {
    DVec z(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) z[i] += s2_inv(i, j) * cur[j];
    cur = z;
    prod *= w_tilde(dec, cur);
  }
  return prod;
}

bool wb_vanishes_on_translate(const BlockDecomposition& dec, const QVec& y_prime) {
  // exact: the restriction x -> W_B(x, y') is a trigonometric polynomial with
  // frequency support {r_i}; it vanishes identically iff every fiber
  // coefficient sum_j e^{2 pi i eta_{i,j} . y'} is zero
  bool exact_vanishes = true;
  for (int i = 0; i < dec.n1() && exact_vanishes; ++i) {
    Cplx coef = fiber_mask(dec, i, y_prime) * (double)dec.n2(i);
    exact_vanishes = std::abs(coef) < 1e-9;
  }

  // sampled: evaluate W_B at 4N random first-block offsets on the translate
  DVec y_d(y_prime.size());
  for (size_t i = 0; i < y_prime.size(); ++i) y_d[i] = to_double(y_prime[i]);
  Rng rng(0x5EEDBA5Eu ^ (std::uint64_t)dec.rank);
  bool sampled_vanishes = true;
  int samples = 4 * dec.b_digits.size();
  for (int s = 0; s < samples && sampled_vanishes; ++s) {
    DVec x(dec.dim);
    for (int i = 0; i < dec.rank; ++i) x[i] = rng.next_double();
    for (int i = dec.rank; i < dec.dim; ++i) x[i] = y_d[i - dec.rank];
    sampled_vanishes = wb_eval(dec.b_digits, x) < 1e-18;
  }
  if (exact_vanishes != sampled_vanishes)
    fail(Errc::internal_error, "vanishing tests disagree on a translate");
  return exact_vanishes;
}

namespace {

// second components of the image translates: y' = S2^{-1}(y + l_2)
QVec image_translate(const BlockDecomposition& dec, const QVec& y, int l_index) {
  ExpandingMatrix s2(dec.s2);
  const IVec& l = dec.l_digits[l_index];
  QVec shifted(dec.dim - dec.rank);
  for (int i = 0; i < dec.dim - dec.rank; ++i) shifted[i] = y[i] + Rat(l[dec.rank + i]);
  return s2.inverse() * shifted;
}

}  // namespace

TranslateCheck check_invariant_translate(const HadamardTriple& t, int r, const QVec& y0) {
  BlockDecomposition dec = decompose(t, r);
  if ((int)y0.size() != t.dim() - r)
    fail(Errc::validation_error, "translate dimension must be d - r");
  TranslateCheck out;
  out.y0 = y0;
  out.invariant = true;
  for (int li = 0; li < t.size(); ++li) {
    QVec img = image_translate(dec, y0, li);
    out.image_translates.push_back(img);
    if (img == y0) {
      out.branches.push_back(TranslateBranch::maps_in);
    } else if (wb_vanishes_on_translate(dec, img)) {
      out.branches.push_back(TranslateBranch::vanishes);
    } else {
      out.branches.push_back(TranslateBranch::neither);
      out.invariant = false;
    }
  }
  return out;
}

std::vector<QVec> candidate_translates(const HadamardTriple& t, int r) {
  ExpandingMatrix s = t.dual();
  AffineIfs dual_ifs(s, t.l_digits);
  BoundingBox box = bounding_box(dual_ifs);
  LatticeBasis gamma = dual_lattice(t.b_digits);
  std::vector<QVec> out;
  for (const auto& p : gamma.points_in_box(box.lo, box.hi))
    out.emplace_back(p.begin() + r, p.end());
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EscapeChain trace_escape(const HadamardTriple& t, int r, const QVec& y0, int max_steps) {
  BlockDecomposition dec = decompose(t, r);
  std::vector<QVec> candidates = candidate_translates(t, r);
  auto is_candidate = [&](const QVec& y) {
    return std::binary_search(candidates.begin(), candidates.end(), y, lex_less);
  };

  EscapeChain chain;
  chain.start = y0;
  chain.states.push_back(y0);
  std::set<std::vector<Rat>> visited{std::vector<Rat>(y0.begin(), y0.end())};

  bool escaping = !is_candidate(y0);
  for (int step = 0; step < max_steps; ++step) {
    const QVec& cur = chain.states.back();
    // reachable image translates where W_B does not vanish identically
    std::optional<QVec> best;
    int best_digit = -1;
    for (int li = 0; li < t.size(); ++li) {
      QVec img = image_translate(dec, cur, li);
      if (wb_vanishes_on_translate(dec, img)) continue;
      if (visited.count(std::vector<Rat>(img.begin(), img.end()))) continue;
      if (!best || lex_less(img, *best)) {
        best = img;
        best_digit = li;
      }
    }
    if (!best) {
      chain.verdict = ChainVerdict::periodic;
      return chain;
    }
    chain.states.push_back(*best);
    chain.digits.push_back(best_digit);
    visited.insert(std::vector<Rat>(best->begin(), best->end()));
    if (escaping) {
      chain.verdict = ChainVerdict::escaped;
      return chain;
    }
    escaping = !is_candidate(*best);
  }
  chain.verdict = ChainVerdict::exhausted;
  return chain;
}

namespace {

// L1(l2): first components of the digits of L whose second component is l2
std::vector<IVec> l1_of(const BlockDecomposition& dec, const IVec& l2) {
  std::vector<IVec> out;
  for (const auto& l : dec.l_digits.vectors()) {
    IVec second(l.begin() + dec.rank, l.end());
    if (second == l2) out.emplace_back(l.begin(), l.begin() + dec.rank);
  }
  return out;
}

}  // namespace

SubspaceConditionReport check_theorem_conditions(const HadamardTriple& t, int r,
                                                 const QVec& y0,
                                                 const SpectrumGenerator& lambda1,
                                                 int depth) {
  BlockDecomposition dec = decompose(t, r);
  int d = t.dim();
  int m = d - r;
  SubspaceConditionReport rep;
  rep.y0 = y0;

  // fixed digit: sigma_{l_2}(y0) = y0  <=>  l_2 = (S2 - I) y0
  QVec l2_fix(m);
  {
    QMat s2q = to_rational(dec.s2);
    QVec s2y = s2q * y0;
    for (int i = 0; i < m; ++i) l2_fix[i] = s2y[i] - y0[i];
  }
  for (int li = 0; li < t.size(); ++li) {
    IVec second(dec.l_digits[li].begin() + r, dec.l_digits[li].end());
    if (to_rational(second) == l2_fix) rep.fixed_digits.push_back(li);
  }
  if (rep.fixed_digits.empty())
    fail(Errc::no_fixed_digit, "no digit l in L with sigma_{l_2}(y0) = y0");
  IVec l2_fix_int = to_integer(l2_fix);
  std::vector<IVec> l1 = l1_of(dec, l2_fix_int);

  // (1) Lambda_1 is a spectrum for mu_1 = invariant measure of (A1, {r_i})
  ExpandingMatrix a1(dec.a1);
  DigitSet proj(r, dec.proj_digits);
  AffineIfs mu1(a1, proj);
  std::vector<DVec> grid = default_grid(mu1, 8, 0xA11CE5u);
  CertificationReport cert = parseval_certify(a1, proj, lambda1, grid, depth, 0, 1e-2);
  rep.parseval_pass = cert.pass;
  rep.parseval_max_deviation = cert.max_deviation;

  // (2a) containment on truncations: every lambda in Lambda_1^(n) equals
  // S1 lambda' + l1 - C y0 with lambda' in Lambda_1^(n+1)
  {
    SpectrumApprox cur = lambda1(depth);
    SpectrumApprox next = lambda1(depth + 1);
    std::sort(next.elements.begin(), next.elements.end(), lex_less);
    QMat s1_inv = inverse(to_rational(dec.s1));
    QVec cy0 = to_rational(dec.c) * y0;
    rep.containment_pass = true;
    for (const auto& lam : cur.elements) {
      bool found = false;
      for (const auto& l1v : l1) {
        QVec shifted(r);
        for (int i = 0; i < r; ++i) shifted[i] = lam[i] + cy0[i] - Rat(l1v[i]);
        QVec prev = s1_inv * shifted;
        found = std::binary_search(next.elements.begin(), next.elements.end(), prev, lex_less);
        if (found) break;
      }
      if (!found) {
        rep.containment_pass = false;
        break;
      }
    }
  }

  // (2b) (lambda_1, -y0) is an S-period for W_B: W_B(x + S^n p) = W_B(x)
  {
    SpectrumApprox sample_src = lambda1(std::min(depth, 3));
    std::vector<QVec> sampled(sample_src.elements.begin(),
                              sample_src.elements.begin() +
                                  std::min<size_t>(sample_src.elements.size(), 32));
    bool integral = true;
    std::vector<QVec> periods;
    for (const auto& lam : sampled) {
      QVec p(d);
      for (int i = 0; i < r; ++i) p[i] = lam[i];
      for (int i = 0; i < m; ++i) p[r + i] = -y0[i];
      integral = integral && is_integer_vec(p);
      periods.push_back(p);
    }
    rep.period.structural = integral;
    int n_max = integral ? 2 : 8;
    int x_count = integral ? 10 : 100;
    QMat s_rat = to_rational(t.scaling.entries().transpose());
    Rng rng(0x9E111u);
    for (const auto& p : periods) {
      QVec sp = p;
      for (int n = 0; n <= n_max; ++n) {
        DVec spd(d);
        for (int i = 0; i < d; ++i) spd[i] = to_double(sp[i]);
        for (int xi = 0; xi < x_count; ++xi) {
          DVec x(d);
          for (int i = 0; i < d; ++i) x[i] = 2.0 * rng.next_double() - 0.5;
          DVec xp(d);
          for (int i = 0; i < d; ++i) xp[i] = x[i] + spd[i];
          double dev = std::abs(wb_eval(t.b_digits, xp) - wb_eval(t.b_digits, x));
          rep.period.max_deviation = std::max(rep.period.max_deviation, dev);
        }
        sp = s_rat * sp;
      }
    }
    rep.period.pass = rep.period.max_deviation < 1e-12;
  }

  // (3) Hadamard subtriple (A1, {r_i}, L1(l2^0)), translated so 0 is a digit
  {
    if ((int)l1.size() == proj.size()) {
      IVec base = l1.front();
      for (const auto& v : l1)
        if (lex_less(to_rational(v), to_rational(base))) base = v;
      std::vector<IVec> shifted;
      for (const auto& v : l1) {
        IVec w(r);
        for (int i = 0; i < r; ++i) w[i] = v[i] - base[i];
        shifted.push_back(w);
      }
      HadamardCheck hc = is_hadamard_triple(a1, proj, DigitSet(r, shifted), 1e-12);
      rep.hadamard_pass = hc.accepted;
      rep.hadamard_defect = hc.defect;
    } else {
      rep.hadamard_pass = false;
      rep.hadamard_defect = std::numeric_limits<double>::infinity();
    }
  }

  rep.fibers_equal = dec.fibers_equal();
  for (int i = 0; i < dec.n1(); ++i) rep.fiber_counts.push_back(dec.n2(i));

  // mu_1 no-overlap via the sufficient condition: r_i distinct mod A1 Z^r
  {
    rep.no_overlap_verified = true;
    for (int i = 0; i < dec.n1() && rep.no_overlap_verified; ++i)
      for (int j = i + 1; j < dec.n1(); ++j) {
        QVec diff(r);
        for (int k = 0; k < r; ++k) diff[k] = Rat(dec.proj_digits[i][k] - dec.proj_digits[j][k]);
        if (is_integer_vec(a1.inverse() * diff)) {
          rep.no_overlap_verified = false;  // condition inconclusive: UNVERIFIED
          break;
        }
      }
    rep.no_overlap = rep.no_overlap_verified;
  }

  rep.all_pass = rep.parseval_pass && rep.containment_pass && rep.period.pass &&
                 rep.hadamard_pass && rep.fibers_equal && rep.no_overlap_verified;
  return rep;
}

SubspaceConditionReport check_corollary_conditions(const HadamardTriple& t, int r,
                                                   const SpectrumGenerator& lambda1,
                                                   int depth) {
  return check_theorem_conditions(t, r, QVec(t.dim() - r, Rat(0)), lambda1, depth);
}

namespace {

// integer fast path for the spectrum rounds: when the seed is integral and
// every intermediate entry provably fits in 62 bits, grow flat int64 rows
// (index-sorted per round) and materialize rationals once at the end
bool integer_rounds(const IMat& s, const DigitSet& digits, const std::vector<QVec>& seed,
                    int depth, std::vector<QVec>* out, std::size_t* collisions) {
  const int d = s.rows();
  if (d > 32 || seed.empty()) return false;
  for (const auto& v : seed)
    for (const auto& q : v)
      if (!is_integer(q)) return false;

  long double row_norm = 0, digit_max = 0, seed_max = 1;
  for (int i = 0; i < d; ++i) {
    long double acc = 0;
    for (int j = 0; j < d; ++j) acc += std::abs(to_double(Rat(s(i, j))));
    row_norm = std::max(row_norm, acc);
  }
  for (const auto& lv : digits.vectors())
    for (const auto& c : lv) digit_max = std::max(digit_max, (long double)std::abs(to_double(Rat(c))));
  for (const auto& v : seed)
    for (const auto& q : v) seed_max = std::max(seed_max, (long double)std::abs(to_double(q)));
  long double bound = seed_max, peak = seed_max;
  for (int n = 0; n < depth; ++n) {
    bound = row_norm * bound + digit_max;
    peak = std::max(peak, bound);
  }
  if (!(peak < 4.0e18)) return false;

  std::vector<long long> s_ll((size_t)d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s_ll[(size_t)i * d + j] = num(Rat(s(i, j))).convert_to<long long>();
  std::vector<long long> dig;
  for (const auto& lv : digits.vectors())
    for (const auto& c : lv) dig.push_back(num(Rat(c)).convert_to<long long>());
  const size_t nd = digits.size();

  std::vector<long long> cur;
  cur.reserve(seed.size() * d);
  for (const auto& v : seed)
    for (const auto& q : v) cur.push_back(num(q).convert_to<long long>());
  size_t count = seed.size();

  std::vector<long long> nxt, buf;
  std::vector<unsigned> idx;
  for (int n = 0; n < depth; ++n) {
    nxt.resize(count * nd * d);
    size_t w = 0;
    for (size_t e = 0; e < count; ++e) {
      const long long* v = &cur[e * d];
      long long sv[32];
      for (int i = 0; i < d; ++i) {
        long long acc = 0;
        const long long* row = &s_ll[(size_t)i * d];
        for (int j = 0; j < d; ++j) acc += row[j] * v[j];
        sv[i] = acc;
      }
      for (size_t k = 0; k < nd; ++k) {
        const long long* l = &dig[k * d];
        for (int i = 0; i < d; ++i) nxt[w++] = sv[i] + l[i];
      }
    }
    size_t n_elems = count * nd;
    idx.resize(n_elems);
    for (size_t i = 0; i < n_elems; ++i) idx[i] = (unsigned)i;
    std::sort(idx.begin(), idx.end(), [&](unsigned a, unsigned b) {
      const long long* pa = &nxt[(size_t)a * d];
      const long long* pb = &nxt[(size_t)b * d];
      for (int i = 0; i < d; ++i)
        if (pa[i] != pb[i]) return pa[i] < pb[i];
      return false;
    });
    buf.clear();
    buf.reserve(n_elems * d);
    size_t kept = 0;
    for (size_t t2 = 0; t2 < n_elems; ++t2) {
      const long long* p = &nxt[(size_t)idx[t2] * d];
      if (kept > 0 && std::equal(p, p + d, &buf[(kept - 1) * d])) {
        ++*collisions;
        continue;
      }
      buf.insert(buf.end(), p, p + d);
      ++kept;
    }
    cur.swap(buf);
    count = kept;
  }

  out->clear();
  out->reserve(count);
  for (size_t e = 0; e < count; ++e) {
    QVec v(d);
    for (int i = 0; i < d; ++i) v[i] = Rat(cur[e * d + i]);
    out->push_back(std::move(v));
  }
  return true;
}

}  // namespace

SpectrumApprox subspace_spectrum(const HadamardTriple& t, int r, const QVec& y0,
                                 const SpectrumGenerator& lambda1, int lambda1_depth,
                                 int depth, const SubspaceConditionReport& report) {
  if (!report.all_pass)
    fail(Errc::conditions_not_met, "spectrum construction requires a passing condition report");
  int d = t.dim();
  SpectrumApprox seed = lambda1(lambda1_depth);
  std::vector<QVec> cur;
  for (const auto& lam : seed.elements) {
    QVec v(d);
    for (int i = 0; i < r; ++i) v[i] = lam[i];
    for (int i = r; i < d; ++i) v[i] = -y0[i - r];
    cur.push_back(v);
  }
  std::sort(cur.begin(), cur.end(), lex_less);
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());

  std::size_t collisions = 0;
  std::vector<QVec> grown;
  if (integer_rounds(t.scaling.entries().transpose(), t.l_digits, cur, depth, &grown,
                     &collisions)) {
    cur = std::move(grown);
  } else {
    QMat s_rat = to_rational(t.scaling.entries().transpose());
    for (int n = 0; n < depth; ++n) {
      std::vector<QVec> next;
      next.reserve(cur.size() * t.size());
      for (const auto& p : cur) {
        QVec sp = s_rat * p;
        for (const auto& lv : t.l_digits.vectors()) next.push_back(sp + to_rational(lv));
      }
      std::sort(next.begin(), next.end(), lex_less);
      auto uend = std::unique(next.begin(), next.end());
      collisions += next.end() - uend;
      next.erase(uend, next.end());
      cur = std::move(next);
    }
  }
  SpectrumApprox out;
  out.depth = depth;
  out.elements = std::move(cur);
  out.provenance = "subspace spectrum, rank " + std::to_string(r) + ", Lambda_1 depth " +
                   std::to_string(lambda1_depth) + ", depth " + std::to_string(depth) +
                   ", collisions " + std::to_string(collisions);
  return out;
}

}  // namespace ifspec
