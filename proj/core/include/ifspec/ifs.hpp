#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ifspec/lattice.hpp"

namespace ifspec {

// tau_b(x) = R^{-1}(x + b) on the B side, sigma_l(x) = S^{-1}(x + l) on the
// L side; which one depends on the scaling passed in.
struct AffineIfs {
  AffineIfs(ExpandingMatrix scaling_, DigitSet digits_);
  ExpandingMatrix scaling;
  DigitSet digits;
};

struct BoundingBox {
  QVec lo, hi;
  bool contains(const QVec& p) const;
};

struct AttractorCloud {
  int depth = 0;
  std::vector<QVec> points;     // deduplicated, lexicographically sorted
  double hausdorff_bound = 0 ;  // distance from the cloud to the true attractor
};

QVec apply_map(const AffineIfs& ifs, int digit_index, const QVec& x);
DVec apply_map(const AffineIfs& ifs, int digit_index, const DVec& x);

// all depth-K truncations sum_{k=1..K} R^{-k} b_k, deduplicated
AttractorCloud attractor_cloud(const AffineIfs& ifs, int depth,
                               std::uint64_t budget = 1u << 20);

// box certified to contain the attractor; exact for diagonal scaling,
// otherwise an interval geometric-series bound
BoundingBox bounding_box(const AffineIfs& ifs);

struct SampleBatch {
  std::vector<DVec> points;
  double tail_radius = 0;  // sup-norm truncation bias bound
};

// n i.i.d. draws of sum_{k=1..K} R^{-k} b_k with uniform digits; the count is
// partitioned into fixed-size chunks with independently derived seeds so the
// result is reproducible and order-stable regardless of scheduling
SampleBatch sample_invariant_measure(const AffineIfs& ifs, int depth, int count,
                                     std::uint64_t seed);

// one point per row, fixed-precision decimals
void write_points_csv(std::ostream& os, const std::vector<QVec>& pts, int precision);
void write_points_csv(std::ostream& os, const std::vector<DVec>& pts, int precision);

}  // namespace ifspec
