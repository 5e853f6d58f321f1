#pragma once

#include <string>

#include "ifspec/problem.hpp"

namespace ifspec {

inline constexpr const char* kLibraryVersion = "1.0.0";

struct PipelineOptions {
  bool skip_montecarlo = false;
  bool include_timing = true;
};

struct RunReport {
  std::string subcommand;
  std::string verdict;    // "SPECTRAL-EVIDENCE" or "FAIL"
  bool pass = false;
  std::string json_text;  // full report; deterministic apart from "timing"
};

// End-to-end evidence pipeline over a problem file carrying subspace analysis
// parameters. Stages, in order: Hadamard unitarity; dual lattice; translate
// invariance of R^r x {y0}; escape analysis of the candidate translates (plain
// and, when a conjugation is present, conjugated); W_B-cycle enumeration;
// spectrum-theorem conditions; spectrum construction; Parseval certification;
// path-measure total-mass check (seeded, skippable). Stops early when a stage
// later stages depend on fails. Verdict SPECTRAL-EVIDENCE iff every executed
// stage passes.
RunReport run_example51_pipeline(const ProblemFile& p, const PipelineOptions& opt = {});

}  // namespace ifspec
