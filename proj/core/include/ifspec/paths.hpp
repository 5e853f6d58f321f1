#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifspec/cycles.hpp"
#include "ifspec/hadamard.hpp"

namespace ifspec {

// Closed invariant set used as an absorption target for path classification.
struct InvariantSetSpec {
  enum class Kind { cycle, subspace_translate, full_space };
  Kind kind = Kind::full_space;
  std::string label;
  std::vector<DVec> cycle_points;  // kind == cycle
  int subspace_rank = 0;           // kind == subspace_translate: R^r x {y0}
  DVec translate;                  // y0, dimension d - r
  double distance_tol = 1e-6;      // default 1e-6 cycles, 1e-4 translates

  // sup-norm distance from x to the set
  double distance(const DVec& x) const;

  static InvariantSetSpec from_cycle(const Cycle& c, double tol = 1e-6);
  static InvariantSetSpec subspace(int rank, const DVec& y0, double tol = 1e-4);
  static InvariantSetSpec everything();
};

struct PathEnsemble {
  DVec start;
  int n_steps = 0;
  int n_paths = 0;
  std::uint64_t seed = 0;
  std::vector<DVec> final_states;       // per path
  std::vector<std::uint8_t> words;      // n_paths x n_steps digit indices
  std::vector<int> classification;      // index into the target list, or -1
  std::vector<double> tail_distances;   // per path: mean distance to its class target
};

// Markov paths: from state y, draw l with probability W_B(sigma_l y) by
// inverse CDF in digit order, then update y <- sigma_l y. A path is classified
// to the first target whose mean distance over the last ceil(n/4) states is
// below that target's tolerance.
PathEnsemble simulate_paths(const DVec& x, const HadamardTriple& t, int n_steps,
                            int n_paths, std::uint64_t seed,
                            const std::vector<InvariantSetSpec>& targets = {});

struct HfEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  int classified = 0;
  int n_paths = 0;
};

// h_F(x): fraction of paths absorbed by F, with binomial standard error
HfEstimate estimate_hf(const DVec& x, const HadamardTriple& t, const InvariantSetSpec& f,
                       int n_steps, int n_paths, std::uint64_t seed);

struct RuelleCheck {
  double residual = 0.0;   // |sum_l W_B(sigma_l x) h(sigma_l x) - h(x)|
  double threshold = 0.0;  // 3 combined standard errors
  bool pass = false;
  HfEstimate at_x;
  std::vector<HfEstimate> at_images;
  std::vector<double> weights;
};

RuelleCheck ruelle_residual(const DVec& x, const HadamardTriple& t, const InvariantSetSpec& f,
                            int n_steps, int n_paths, std::uint64_t seed);

struct TotalMassCheck {
  double mass = 0.0;  // empirical P_x(union of N(F_k))
  double stderr_ = 0.0;
  double unclassified_fraction = 0.0;
  std::vector<HfEstimate> per_target;
  bool pass = false;  // |mass - 1| <= 3 stderr
};

TotalMassCheck total_mass_check(const DVec& x, const HadamardTriple& t,
                                const std::vector<InvariantSetSpec>& targets, int n_steps,
                                int n_paths, std::uint64_t seed);

}  // namespace ifspec
