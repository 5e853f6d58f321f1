#pragma once

#include <vector>

#include "ifspec/fourier.hpp"
#include "ifspec/hadamard.hpp"

namespace ifspec {

// A cycle of the dual IFS: applying sigma_{l_1}, ..., sigma_{l_m} to points[0]
// walks through `points` and returns to points[0] exactly.
struct Cycle {
  std::vector<int> word;      // indices into L, lexicographically least rotation
  std::vector<QVec> points;   // points[j] = sigma_{l_j} ... sigma_{l_1}(points[0]), points[m-1] = start
  bool is_wb = false;         // W_B = 1 at every point
  std::vector<double> wb_values;
};

// unique x0 with sigma_{l_m} ... sigma_{l_1}(x0) = x0, exact rational
QVec cycle_point(const std::vector<int>& word, const ExpandingMatrix& s, const DigitSet& l);

// Candidate W_B-cycle point (a dual-lattice point inside the attractor box,
// where W_B = 1) with its rejection evidence: the W_B values < 1 met on
// transitions out of the candidate's W_B = 1 transition closure.
struct CycleCandidate {
  QVec point;
  double wb_value = 0.0;
  bool on_cycle = false;                    // belongs to some returned W_B-cycle
  std::vector<QVec> closure;                // candidates reachable through W_B = 1 transitions
  std::vector<double> rejection_wb_values;  // sorted, deduplicated, all < 1
};

struct WbCycleResult {
  std::vector<Cycle> cycles;  // every W_B-cycle with word length <= m_max, once
  std::vector<CycleCandidate> candidates;
};

// Two-phase search: candidates = dual_lattice(B) intersected with the X_L
// bounding box (W_B = 1 forces membership in the dual lattice for integer B);
// then all words over L up to length m_max, deduplicated by rotation, keeping
// those whose exact orbits stay inside the candidate set.
WbCycleResult enumerate_wb_cycles(const ExpandingMatrix& r, const DigitSet& b,
                                  const DigitSet& l, int m_max,
                                  std::uint64_t budget = 1u << 20);

// n-fold application of Lambda -> S Lambda + L starting from -C, deduplicated;
// requires c.is_wb
SpectrumApprox cycle_spectrum(const Cycle& c, const ExpandingMatrix& s, const DigitSet& l,
                              int depth);

}  // namespace ifspec
