#include "ifspec/cycles.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ifspec/ifs.hpp"

namespace ifspec {

QVec cycle_point(const std::vector<int>& word, const ExpandingMatrix& s, const DigitSet& l) {
  if (word.empty()) fail(Errc::validation_error, "cycle word must be nonempty");
  int d = s.dim();
  int m = (int)word.size();
  // x0 = S^{-m} x0 + sum_j S^{-(m-j+1)} l_j  =>  (I - S^{-m}) x0 = c
  QVec c(d, Rat(0));
  for (int j = 1; j <= m; ++j) {
    if (word[j - 1] < 0 || word[j - 1] >= l.size())
      fail(Errc::validation_error, "cycle word digit index out of range");
    c = c + matrix_inverse_power(s, m - j + 1) * to_rational(l[word[j - 1]]);
  }
  QMat a = QMat::identity(d);
  QMat sm = matrix_inverse_power(s, m);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) -= sm(i, j);
  return inverse(a) * c;  // nonsingular: S expanding makes 1 a non-eigenvalue of S^{-m}
}

namespace {

// lexicographically least rotation marker: true iff `word` is minimal among
// its cyclic rotations (ties broken by identity)
bool is_least_rotation(const std::vector<int>& word) {
  int m = (int)word.size();
  for (int r = 1; r < m; ++r) {
    for (int i = 0; i < m; ++i) {
      int a = word[(r + i) % m], b = word[i];
      if (a != b) {
        if (a < b) return false;
        break;
      }
    }
  }
  return true;
}

}  // namespace

WbCycleResult enumerate_wb_cycles(const ExpandingMatrix& r, const DigitSet& b,
                                  const DigitSet& l, int m_max, std::uint64_t budget) {
  if (m_max < 1) fail(Errc::validation_error, "m_max must be >= 1");
  int d = r.dim();
  ExpandingMatrix s = r.transpose();
  AffineIfs dual_ifs(s, l);
  BoundingBox box = bounding_box(dual_ifs);
  LatticeBasis gamma = dual_lattice(b);
  std::vector<QVec> cand_points = gamma.points_in_box(box.lo, box.hi);

  WbCycleResult out;
  auto cand_index = [&](const QVec& p) -> int {
    auto it = std::lower_bound(cand_points.begin(), cand_points.end(), p, lex_less);
    if (it != cand_points.end() && *it == p) return (int)(it - cand_points.begin());
    return -1;
  };

  // rejection evidence per candidate: walk the W_B = 1 transition closure,
  // recording the sub-1 W_B values met on the way out
  for (const auto& c0 : cand_points) {
    CycleCandidate cand;
    cand.point = c0;
    cand.wb_value = wb_eval(b, c0);
    std::vector<QVec> frontier{c0};
    std::set<std::vector<Rat>> seen{std::vector<Rat>(c0.begin(), c0.end())};
    std::vector<double> rejected;
    while (!frontier.empty()) {
      QVec cur = frontier.back();
      frontier.pop_back();
      cand.closure.push_back(cur);
      for (int li = 0; li < l.size(); ++li) {
        QVec img = s.inverse() * (cur + to_rational(l[li]));
        double w = wb_eval(b, img);
        if (w >= 1.0 - 1e-12) {
          if (cand_index(img) >= 0 && seen.insert(std::vector<Rat>(img.begin(), img.end())).second)
            frontier.push_back(img);
        } else {
          rejected.push_back(w);
        }
      }
    }
    std::sort(cand.closure.begin(), cand.closure.end(), lex_less);
    std::sort(rejected.begin(), rejected.end());
    for (double w : rejected)
      if (cand.rejection_wb_values.empty() ||
          std::abs(cand.rejection_wb_values.back() - w) > 1e-12)
        cand.rejection_wb_values.push_back(w);
    out.candidates.push_back(cand);
  }

  // word enumeration with rotation dedup
  std::uint64_t words = 0;
  std::vector<int> word;
  std::function<void()> visit = [&]() {
    if (++words > budget) fail(Errc::budget_exceeded, "cycle word budget exhausted");
    if (!word.empty() && is_least_rotation(word)) {
      QVec x0 = cycle_point(word, s, l);
      std::vector<QVec> orbit;
      QVec cur = x0;
      bool inside = cand_index(x0) >= 0;
      for (size_t j = 0; j < word.size() && inside; ++j) {
        cur = s.inverse() * (cur + to_rational(l[word[j]]));
        orbit.push_back(cur);
        inside = cand_index(cur) >= 0;
      }
      bool distinct = true;
      if (inside) {
        std::vector<QVec> sorted_orbit = orbit;
        std::sort(sorted_orbit.begin(), sorted_orbit.end(), lex_less);
        distinct = std::adjacent_find(sorted_orbit.begin(), sorted_orbit.end()) ==
                   sorted_orbit.end();
      }
      if (inside && distinct) {
        Cycle cyc;
        cyc.word = word;
        cyc.points = orbit;  // orbit.back() == x0 by the fixed-point identity
        cyc.is_wb = true;
        for (const auto& p : orbit) {
          double w = wb_eval(b, p);
          cyc.wb_values.push_back(w);
          cyc.is_wb = cyc.is_wb && w >= 1.0 - 1e-12;
        }
        if (cyc.is_wb) {
          out.cycles.push_back(cyc);
          for (const auto& p : orbit) {
            int idx = cand_index(p);
            if (idx >= 0) out.candidates[idx].on_cycle = true;
          }
        }
      }
    }
    if ((int)word.size() == m_max) return;
    for (int li = 0; li < l.size(); ++li) {
      word.push_back(li);
      visit();
      word.pop_back();
    }
  };
  visit();
  return out;
}

SpectrumApprox cycle_spectrum(const Cycle& c, const ExpandingMatrix& s, const DigitSet& l,
                              int depth) {
  if (!c.is_wb) fail(Errc::not_wb_cycle, "cycle spectrum requires a W_B-cycle");
  if (depth < 0) fail(Errc::validation_error, "depth must be >= 0");
  std::vector<QVec> cur;
  for (const auto& p : c.points) cur.push_back(negate(p));
  std::sort(cur.begin(), cur.end(), lex_less);
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());

  QMat s_rat = to_rational(s.entries());
  std::size_t collisions = 0;
  for (int n = 0; n < depth; ++n) {
    std::vector<QVec> next;
    next.reserve(cur.size() * l.size());
    for (const auto& p : cur) {
      QVec sp = s_rat * p;
      for (const auto& lv : l.vectors()) next.push_back(sp + to_rational(lv));
    }
    std::sort(next.begin(), next.end(), lex_less);
    auto uend = std::unique(next.begin(), next.end());
    collisions += next.end() - uend;
    next.erase(uend, next.end());
    cur = std::move(next);
  }
  SpectrumApprox out;
  out.depth = depth;
  out.elements = std::move(cur);
  out.provenance = "cycle spectrum, word length " + std::to_string(c.word.size()) +
                   ", depth " + std::to_string(depth) + ", collisions " +
                   std::to_string(collisions);
  return out;
}

}  // namespace ifspec
