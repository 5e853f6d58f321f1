#include "ifspec/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "ifspec/cycles.hpp"
#include "ifspec/ifs.hpp"
#include "ifspec/paths.hpp"
#include "ifspec/rng.hpp"
#include "ifspec/subspace.hpp"

namespace ifspec {

namespace {

using nlohmann::json;

json qvec_json(const QVec& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(rat_to_string(q));
  return out;
}

json ivec_json(const IVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back((long long)x);
  return out;
}

const char* branch_name(TranslateBranch b) {
  switch (b) {
    case TranslateBranch::maps_in: return "maps_in";
    case TranslateBranch::vanishes: return "vanishes";
    default: return "neither";
  }
}

const char* verdict_name(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::periodic: return "PERIODIC";
    case ChainVerdict::escaped: return "ESCAPED";
    default: return "EXHAUSTED";
  }
}

json chain_json(const EscapeChain& c) {
  json out;
  out["start"] = qvec_json(c.start);
  json states = json::array();
  for (const auto& s : c.states) states.push_back(qvec_json(s));
  out["states"] = std::move(states);
  out["digits"] = c.digits;
  out["verdict"] = verdict_name(c.verdict);
  return out;
}

json certification_json(const CertificationReport& cert) {
  json out;
  out["pass"] = cert.pass;
  out["max_deviation"] = cert.max_deviation;
  out["tol"] = cert.tol;
  out["spectrum_depth"] = cert.spectrum_depth;
  out["product_depth"] = cert.product_depth;
  out["product_tail_bound"] = cert.product_tail_bound;
  out["monotone"] = cert.monotone;
  out["nested"] = cert.nested;
  out["duplicate_count"] = cert.duplicate_count;
  out["spectrum_sizes"] = cert.spectrum_sizes;
  out["grid_points"] = cert.grid.size();
  double lo = 1.0, hi = 0.0;
  for (const auto& sums : cert.partial_sums) {
    lo = std::min(lo, sums.back());
    hi = std::max(hi, sums.back());
  }
  out["final_sum_min"] = lo;
  out["final_sum_max"] = hi;
  return out;
}

json conditions_json(const SubspaceConditionReport& rep) {
  json out;
  out["y0"] = qvec_json(rep.y0);
  out["fixed_digits"] = rep.fixed_digits;
  out["parseval_pass"] = rep.parseval_pass;
  out["parseval_max_deviation"] = rep.parseval_max_deviation;
  out["containment_pass"] = rep.containment_pass;
  out["period_pass"] = rep.period.pass;
  out["period_structural"] = rep.period.structural;
  out["period_max_deviation"] = rep.period.max_deviation;
  out["hadamard_pass"] = rep.hadamard_pass;
  out["hadamard_defect"] = rep.hadamard_defect;
  out["fibers_equal"] = rep.fibers_equal;
  out["fiber_counts"] = rep.fiber_counts;
  out["no_overlap"] = rep.no_overlap_verified ? "VERIFIED" : "UNVERIFIED";
  out["all_pass"] = rep.all_pass;
  return out;
}

class StageRunner {
 public:
  StageRunner(json& report, bool timing) : report_(report), timing_(timing) {
    report_["stages"] = json::object();
    report_["stage_order"] = json::array();
    if (timing_) report_["timing"] = {{"stage_ms", json::object()}};
  }

  // runs the stage body; returns its pass flag (false also on thrown Error)
  template <typename F>
  bool run(const std::string& name, const char* mode, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    json payload;
    bool pass = false;
    try {
      pass = body(payload);
    } catch (const Error& e) {
      payload["error"] = e.what();
    }
    payload["pass"] = pass;
    payload["mode"] = mode;
    report_["stages"][name] = std::move(payload);
    report_["stage_order"].push_back(name);
    if (timing_) {
      double ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      report_["timing"]["stage_ms"][name] = ms;
    }
    all_pass_ = all_pass_ && pass;
    return pass;
  }

  void skip(const std::string& name) {
    report_["stages"][name] = {{"skipped", true}};
    report_["stage_order"].push_back(name);
  }

  bool all_pass() const { return all_pass_; }

 private:
  json& report_;
  bool timing_;
  bool all_pass_ = true;
};

}  // namespace

RunReport run_example51_pipeline(const ProblemFile& p, const PipelineOptions& opt) {
  if (!p.analysis.subspace_rank || !p.analysis.lambda1_digits)
    fail(Errc::validation_error,
         "pipeline requires analysis.subspace_rank and analysis.lambda1_digits");
  const int r = *p.analysis.subspace_rank;
  const int d = p.dimension;
  QVec y0 = p.analysis.translate.value_or(QVec(d - r, Rat(0)));

  HadamardTriple triple = to_triple(p);
  json report;
  report["subcommand"] = "example51";
  report["problem"] = json::parse(serialize_problem(p));
  report["versions"] = {{"ifspec", kLibraryVersion}};

  StageRunner stages(report, opt.include_timing);
  auto t_start = std::chrono::steady_clock::now();

  bool ok = stages.run("hadamard", "deterministic", [&](json& out) {
    HadamardCheck hc =
        is_hadamard_triple(triple.scaling, triple.b_digits, triple.l_digits,
                           p.analysis.tol_unitary);
    out["accepted"] = hc.accepted;
    out["defect"] = hc.defect;
    CMat h = hadamard_matrix(triple.scaling, triple.b_digits, triple.l_digits);
    json rows = json::array();
    for (int i = 0; i < h.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < h.cols(); ++j) row.push_back({h(i, j).real(), h(i, j).imag()});
      rows.push_back(std::move(row));
    }
    out["matrix"] = std::move(rows);
    return hc.accepted;
  });
  if (!ok) {
    report["verdict"] = "FAIL";
    report["failed_stage"] = "hadamard";
    goto finish;
  }

  stages.run("dual_lattice", "deterministic", [&](json& out) {
    LatticeBasis gamma = dual_lattice(triple.b_digits);
    json basis = json::array();
    for (int j = 0; j < gamma.dim(); ++j) basis.push_back(qvec_json(gamma.basis_vector(j)));
    out["basis"] = std::move(basis);
    return true;
  });

  ok = stages.run("invariant_translate", "deterministic", [&](json& out) {
    TranslateCheck tc = check_invariant_translate(triple, r, y0);
    out["y0"] = qvec_json(tc.y0);
    json branches = json::array();
    for (size_t i = 0; i < tc.branches.size(); ++i)
      branches.push_back({{"digit", ivec_json(triple.l_digits[i])},
                          {"branch", branch_name(tc.branches[i])},
                          {"image_translate", qvec_json(tc.image_translates[i])}});
    out["branches"] = std::move(branches);
    out["invariant"] = tc.invariant;
    return tc.invariant;
  });
  if (!ok) {
    report["verdict"] = "FAIL";
    report["failed_stage"] = "invariant_translate";
    goto finish;
  }

  stages.run("escape_plain", "deterministic", [&](json& out) {
    std::vector<QVec> cands = candidate_translates(triple, r);
    json chains = json::array();
    bool all_ok = true;
    for (const auto& c : cands) {
      if (c == y0) continue;  // the invariant translate itself
      EscapeChain chain = trace_escape(triple, r, c);
      all_ok = all_ok && chain.verdict == ChainVerdict::escaped;
      chains.push_back(chain_json(chain));
    }
    out["candidates"] = [&] {
      json a = json::array();
      for (const auto& c : cands) a.push_back(qvec_json(c));
      return a;
    }();
    out["chains"] = std::move(chains);
    out["all_escaped"] = all_ok;
    return all_ok;
  });

  if (p.conjugation) {
    stages.run("escape_conjugated", "deterministic", [&](json& out) {
      HadamardTriple conj = conjugate_triple(UnimodularMatrix(*p.conjugation), triple);
      json m_rows = json::array();
      for (int i = 0; i < p.conjugation->rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < p.conjugation->cols(); ++j)
          row.push_back((long long)(*p.conjugation)(i, j));
        m_rows.push_back(std::move(row));
      }
      out["conjugation"] = std::move(m_rows);
      std::vector<QVec> cands = candidate_translates(conj, r);
      json chains = json::array();
      bool all_ok = !cands.empty();
      for (const auto& c : cands) {
        EscapeChain chain = trace_escape(conj, r, c);
        all_ok = all_ok && chain.verdict == ChainVerdict::escaped;
        chains.push_back(chain_json(chain));
      }
      out["candidates"] = [&] {
        json a = json::array();
        for (const auto& c : cands) a.push_back(qvec_json(c));
        return a;
      }();
      out["chains"] = std::move(chains);
      out["all_escaped"] = all_ok;
      return all_ok;
    });
  } else {
    stages.skip("escape_conjugated");
  }

  stages.run("wb_cycles", "deterministic", [&](json& out) {
    WbCycleResult res = enumerate_wb_cycles(triple.scaling, triple.b_digits,
                                            triple.l_digits, p.analysis.cycle_max_len);
    json cycles = json::array();
    for (const auto& c : res.cycles) {
      json jc;
      jc["word"] = c.word;
      json pts = json::array();
      for (const auto& pt : c.points) pts.push_back(qvec_json(pt));
      jc["points"] = std::move(pts);
      jc["wb_values"] = c.wb_values;
      jc["is_wb"] = c.is_wb;
      cycles.push_back(std::move(jc));
    }
    out["cycles"] = std::move(cycles);
    json cands = json::array();
    for (const auto& c : res.candidates) {
      json jc;
      jc["point"] = qvec_json(c.point);
      jc["wb_value"] = c.wb_value;
      jc["on_cycle"] = c.on_cycle;
      jc["rejection_wb_values"] = c.rejection_wb_values;
      cands.push_back(std::move(jc));
    }
    out["candidates"] = std::move(cands);
    bool trivial_only =
        res.cycles.size() == 1 &&
        std::all_of(res.cycles[0].points.begin(), res.cycles[0].points.end(),
                    [](const QVec& pt) {
                      return std::all_of(pt.begin(), pt.end(),
                                         [](const Rat& q) { return q == 0; });
                    });
    out["trivial_only"] = trivial_only;
    return trivial_only;
  });

  {
    BlockDecomposition dec = decompose(triple, r);
    SpectrumGenerator lambda1 =
        radix_spectrum_generator(dec.a1, *p.analysis.lambda1_digits);

    SubspaceConditionReport conditions;
    ok = stages.run("conditions", "deterministic", [&](json& out) {
      conditions = check_theorem_conditions(triple, r, y0, lambda1,
                                            p.analysis.lambda1_depth);
      out.update(conditions_json(conditions));
      return conditions.all_pass;
    });
    if (!ok) {
      report["verdict"] = "FAIL";
      report["failed_stage"] = "conditions";
      goto finish;
    }

    SpectrumGenerator lambda = [&](int n) {
      return subspace_spectrum(triple, r, y0, lambda1, p.analysis.lambda1_depth, n,
                               conditions);
    };

    stages.run("spectrum", "deterministic", [&](json& out) {
      SpectrumApprox s = lambda(p.analysis.spectrum_depth);
      out["depth"] = s.depth;
      out["size"] = s.elements.size();
      out["provenance"] = s.provenance;
      return true;
    });

    stages.run("parseval", "deterministic", [&](json& out) {
      // uniform grid {0, 1/2, 1}^d keeps this stage free of sampling
      std::vector<DVec> grid;
      if (d == 2) {
        for (int i = 0; i <= 2; ++i)
          for (int j = 0; j <= 2; ++j) grid.push_back({i / 2.0, j / 2.0});
      } else {
        AffineIfs ifs(triple.scaling, triple.b_digits);
        grid = default_grid(ifs, 20, p.analysis.seed);
      }
      CertificationReport cert =
          parseval_certify(triple.scaling, triple.b_digits, lambda, grid,
                           p.analysis.spectrum_depth, p.analysis.product_depth,
                           p.analysis.tol_certify);
      out.update(certification_json(cert));
      return cert.pass;
    });
  }

  if (opt.skip_montecarlo) {
    stages.skip("total_mass");
  } else {
    stages.run("total_mass", "seeded", [&](json& out) {
      DVec y0d(y0.size());
      for (size_t i = 0; i < y0.size(); ++i) y0d[i] = to_double(y0[i]);
      std::vector<InvariantSetSpec> targets{InvariantSetSpec::subspace(r, y0d)};
      AffineIfs dual_ifs(triple.dual(), triple.l_digits);
      BoundingBox box = bounding_box(dual_ifs);
      DVec x(d);
      Rng rng(p.analysis.seed);
      for (int i = 0; i < d; ++i) {
        double lo = to_double(box.lo[i]), hi = to_double(box.hi[i]);
        x[i] = lo + (hi - lo) * rng.next_double();
      }
      TotalMassCheck mc = total_mass_check(x, triple, targets, p.analysis.n_steps,
                                           p.analysis.n_paths, p.analysis.seed);
      out["x"] = x;
      out["mass"] = mc.mass;
      out["stderr"] = mc.stderr_;
      out["unclassified_fraction"] = mc.unclassified_fraction;
      out["n_paths"] = p.analysis.n_paths;
      out["n_steps"] = p.analysis.n_steps;
      out["seed"] = p.analysis.seed;
      return mc.pass;
    });
  }

  report["verdict"] = stages.all_pass() ? "SPECTRAL-EVIDENCE" : "FAIL";

finish:
  if (opt.include_timing)
    report["timing"]["total_ms"] = std::chrono::duration<double, std::milli>(
                                       std::chrono::steady_clock::now() - t_start)
                                       .count();
  RunReport out;
  out.subcommand = "example51";
  out.verdict = report["verdict"].get<std::string>();
  out.pass = out.verdict == "SPECTRAL-EVIDENCE";
  out.json_text = report.dump(2) + "\n";
  return out;
}

}  // namespace ifspec
