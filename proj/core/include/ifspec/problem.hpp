#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifspec/fourier.hpp"
#include "ifspec/hadamard.hpp"

namespace ifspec {

// Tunables shared by the analysis subcommands. product_depth = 0 means the
// evaluator picks the depth from its certified tail bound.
struct AnalysisParams {
  int product_depth = 0;
  int spectrum_depth = 6;
  int cycle_max_len = 4;
  int n_paths = 100000;
  int n_steps = 64;
  std::uint64_t seed = 1;
  double tol_unitary = 1e-12;
  double tol_certify = 1e-2;
  // invariant-subspace analysis (optional)
  std::optional<int> subspace_rank;
  std::optional<QVec> translate;                     // y0, rationals
  std::optional<std::vector<IVec>> lambda1_digits;   // radix digits of Lambda_1
  int lambda1_depth = 6;
};

struct ProblemFile {
  std::string name;
  int dimension = 0;
  IMat scaling;                    // R, row-major in the file
  std::vector<IVec> digits_b;
  std::vector<IVec> digits_l;
  std::optional<IMat> conjugation; // M, unimodular
  AnalysisParams analysis;
};

// JSON ingestion with validation; errors name the violated assumption
// ("not expanding", "0 in B required", "#B != #L", ...).
ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

// canonical JSON form; serialize(parse(x)) is idempotent
std::string serialize_problem(const ProblemFile& p);

HadamardTriple to_triple(const ProblemFile& p);

// depth-n radix truncation {sum_{k<n} A^k a_k : a_k digits}, lex-sorted;
// the standard Lambda_1 generator for subspace spectra
SpectrumGenerator radix_spectrum_generator(const IMat& a, std::vector<IVec> digits);

}  // namespace ifspec
