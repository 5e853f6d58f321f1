// ifspec: construct, analyze, and numerically certify spectra of self-affine
// measures driven by complex Hadamard triples.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifspec/cycles.hpp"
#include "ifspec/fourier.hpp"
#include "ifspec/ifs.hpp"
#include "ifspec/paths.hpp"
#include "ifspec/pipeline.hpp"
#include "ifspec/problem.hpp"
#include "ifspec/rng.hpp"
#include "ifspec/subspace.hpp"

namespace {

using namespace ifspec;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  std::string problem_path;
  std::string out_path;  // empty: stdout
  int precision = 12;
  std::optional<double> tol_unitary;
  std::optional<double> tol_certify;
  std::optional<int> product_depth;
  std::optional<int> spectrum_depth;
  std::optional<int> cycle_max_len;
  std::optional<int> n_paths;
  std::optional<int> n_steps;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, GlobalFlags& g) {
  cmd->add_option("problem", g.problem_path, "problem file (JSON)")->required();
  cmd->add_option("--out", g.out_path, "write the JSON report here instead of stdout");
  cmd->add_option("--precision", g.precision, "decimal digits in CSV output");
  cmd->add_option("--tol-unitary", g.tol_unitary, "Hadamard unitarity tolerance");
  cmd->add_option("--tol-certify", g.tol_certify, "Parseval certification tolerance");
  cmd->add_option("--product-depth", g.product_depth, "mu-hat product depth (0 = auto)");
  cmd->add_option("--spectrum-depth", g.spectrum_depth, "spectrum truncation depth");
  cmd->add_option("--cycle-max-len", g.cycle_max_len, "maximum cycle word length");
  cmd->add_option("--paths", g.n_paths, "number of simulated paths");
  cmd->add_option("--steps", g.n_steps, "steps per simulated path");
  cmd->add_option("--seed", g.seed, "random seed");
}

ProblemFile load_problem(const GlobalFlags& g) {
  ProblemFile p = parse_problem(g.problem_path);
  AnalysisParams& a = p.analysis;
  if (g.tol_unitary) a.tol_unitary = *g.tol_unitary;
  if (g.tol_certify) a.tol_certify = *g.tol_certify;
  if (g.product_depth) a.product_depth = *g.product_depth;
  if (g.spectrum_depth) a.spectrum_depth = *g.spectrum_depth;
  if (g.cycle_max_len) a.cycle_max_len = *g.cycle_max_len;
  if (g.n_paths) a.n_paths = *g.n_paths;
  if (g.n_steps) a.n_steps = *g.n_steps;
  if (g.seed) a.seed = *g.seed;
  return p;
}

void emit(const json& report, const GlobalFlags& g) {
  std::string text = report.dump(2) + "\n";
  if (g.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(g.out_path);
    if (!out) fail(Errc::validation_error, "cannot open output file: " + g.out_path);
    out << text;
  }
}

void emit_text(const std::string& text, const GlobalFlags& g) {
  if (g.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(g.out_path);
    if (!out) fail(Errc::validation_error, "cannot open output file: " + g.out_path);
    out << text;
  }
}

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

// the fixed point of sigma_0: every Hadamard-style system has it since 0 in L
Cycle trivial_cycle(const HadamardTriple& t) {
  int zero_index = -1;
  for (int i = 0; i < t.size(); ++i) {
    const IVec& l = t.l_digits[i];
    if (std::all_of(l.begin(), l.end(), [](const Int& x) { return x == 0; })) zero_index = i;
  }
  if (zero_index < 0) fail(Errc::validation_error, "0 in L required");
  Cycle c;
  c.word = {zero_index};
  c.points = {QVec(t.dim(), Rat(0))};
  c.is_wb = true;
  c.wb_values = {1.0};
  return c;
}

// The spectrum a problem file describes: the invariant-subspace construction
// when analysis parameters are present, else iterated digit sums seeded from
// the trivial W_B-cycle. Condition checks for the subspace route happen once,
// up front.
struct SpectrumPlan {
  SpectrumGenerator generator;
  std::string description;
  std::optional<SubspaceConditionReport> conditions;
};

SpectrumPlan plan_spectrum(const ProblemFile& p, const HadamardTriple& t) {
  SpectrumPlan plan;
  if (p.analysis.subspace_rank && p.analysis.lambda1_digits) {
    int r = *p.analysis.subspace_rank;
    QVec y0 = p.analysis.translate.value_or(QVec(p.dimension - r, Rat(0)));
    BlockDecomposition dec = decompose(t, r);
    SpectrumGenerator lambda1 = radix_spectrum_generator(dec.a1, *p.analysis.lambda1_digits);
    int l1_depth = p.analysis.lambda1_depth;
    SubspaceConditionReport rep =
        check_theorem_conditions(t, r, y0, lambda1, l1_depth);
    plan.conditions = rep;
    plan.generator = [t, r, y0, lambda1, l1_depth, rep](int n) {
      return subspace_spectrum(t, r, y0, lambda1, l1_depth, n, rep);
    };
    plan.description = "invariant-subspace spectrum, rank " + std::to_string(r);
  } else {
    Cycle c = trivial_cycle(t);
    ExpandingMatrix s = t.dual();
    DigitSet l = t.l_digits;
    plan.generator = [c, s, l](int n) { return cycle_spectrum(c, s, l, n); };
    plan.description = "trivial-cycle spectrum";
  }
  return plan;
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

DVec random_box_point(const HadamardTriple& t, std::uint64_t seed) {
  AffineIfs dual_ifs(t.dual(), t.l_digits);
  BoundingBox box = bounding_box(dual_ifs);
  DVec x(t.dim());
  Rng rng(seed);
  for (int i = 0; i < t.dim(); ++i) {
    double lo = to_double(box.lo[i]), hi = to_double(box.hi[i]);
    x[i] = lo + (hi - lo) * rng.next_double();
  }
  return x;
}

// ---------------------------------------------------------------- subcommands

int run_check_hadamard(const GlobalFlags& g, bool print_matrix) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  HadamardCheck hc =
      is_hadamard_triple(t.scaling, t.b_digits, t.l_digits, p.analysis.tol_unitary);
  json report;
  report["subcommand"] = "check-hadamard";
  report["problem"] = p.name;
  report["accepted"] = hc.accepted;
  report["defect"] = hc.defect;
  report["tol_unitary"] = p.analysis.tol_unitary;
  report["incongruent_mod_S"] = check_incongruence(t.l_digits, t.dual());
  if (print_matrix) {
    CMat h = hadamard_matrix(t.scaling, t.b_digits, t.l_digits);
    json rows = json::array();
    for (int i = 0; i < h.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < h.cols(); ++j) row.push_back({h(i, j).real(), h(i, j).imag()});
      rows.push_back(std::move(row));
    }
    report["matrix"] = std::move(rows);
  }
  emit(report, g);
  return hc.accepted ? kExitPass : kExitFail;
}

int run_attractor(const GlobalFlags& g, int depth, const std::string& csv_path) {
  ProblemFile p = load_problem(g);
  AffineIfs ifs(ExpandingMatrix(p.scaling), DigitSet(p.dimension, p.digits_b));
  AttractorCloud cloud = attractor_cloud(ifs, depth);
  BoundingBox box = bounding_box(ifs);
  json report;
  report["subcommand"] = "attractor";
  report["problem"] = p.name;
  report["depth"] = cloud.depth;
  report["points"] = cloud.points.size();
  report["hausdorff_bound"] = cloud.hausdorff_bound;
  report["bounding_box"] = {{"lo", qvec_json(box.lo)}, {"hi", qvec_json(box.hi)}};
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) fail(Errc::validation_error, "cannot open CSV file: " + csv_path);
    write_points_csv(csv, cloud.points, g.precision);
    report["csv"] = csv_path;
  }
  emit(report, g);
  return kExitPass;
}

int run_mu_hat(const GlobalFlags& g, int grid_count, const std::string& csv_path) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  AffineIfs ifs(t.scaling, t.b_digits);
  std::vector<DVec> grid = default_grid(ifs, grid_count, p.analysis.seed);
  MuHatEvaluator ev(t.scaling, t.b_digits);
  json report;
  report["subcommand"] = "mu-hat";
  report["problem"] = p.name;
  report["grid_points"] = grid.size();
  report["product_depth"] = p.analysis.product_depth;
  std::ostringstream csv;
  for (int i = 0; i < p.dimension; ++i) csv << "x" << (i + 1) << ",";
  csv << "re,im,abs2\n";
  double max_tail = 0;
  char buf[64];
  for (const auto& x : grid) {
    MuHatResult r = ev.eval(x, p.analysis.product_depth);
    max_tail = std::max(max_tail, r.tail_bound);
    for (double xi : x) {
      std::snprintf(buf, sizeof buf, "%.*f,", g.precision, xi);
      csv << buf;
    }
    std::snprintf(buf, sizeof buf, "%.*f,%.*f,%.*f\n", g.precision, r.value.real(),
                  g.precision, r.value.imag(), g.precision, std::norm(r.value));
    csv << buf;
  }
  report["max_tail_bound"] = max_tail;
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) fail(Errc::validation_error, "cannot open CSV file: " + csv_path);
    out << csv.str();
    report["csv"] = csv_path;
    emit(report, g);
  } else {
    emit_text(csv.str(), g);
  }
  return kExitPass;
}

int run_find_cycles(const GlobalFlags& g) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  WbCycleResult res =
      enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, p.analysis.cycle_max_len);
  json report;
  report["subcommand"] = "find-cycles";
  report["problem"] = p.name;
  report["cycle_max_len"] = p.analysis.cycle_max_len;
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
  report["cycles"] = std::move(cycles);
  json cands = json::array();
  for (const auto& c : res.candidates) {
    json jc;
    jc["point"] = qvec_json(c.point);
    jc["wb_value"] = c.wb_value;
    jc["on_cycle"] = c.on_cycle;
    json closure = json::array();
    for (const auto& q : c.closure) closure.push_back(qvec_json(q));
    jc["closure"] = std::move(closure);
    jc["rejection_wb_values"] = c.rejection_wb_values;
    cands.push_back(std::move(jc));
  }
  report["candidates"] = std::move(cands);
  emit(report, g);
  return kExitPass;
}

int run_build_spectrum(const GlobalFlags& g, const std::string& csv_path) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  SpectrumPlan plan = plan_spectrum(p, t);
  json report;
  report["subcommand"] = "build-spectrum";
  report["problem"] = p.name;
  report["construction"] = plan.description;
  if (plan.conditions) {
    report["conditions"] = conditions_json(*plan.conditions);
    if (!plan.conditions->all_pass) {
      report["verdict"] = "FAIL";
      emit(report, g);
      return kExitFail;
    }
  }
  SpectrumApprox s = plan.generator(p.analysis.spectrum_depth);
  report["depth"] = s.depth;
  report["size"] = s.elements.size();
  report["provenance"] = s.provenance;
  // small spectra are inlined exactly; larger ones only fit in the CSV side
  // file, so the report just records where they went
  constexpr std::size_t kInlineLimit = 4096;
  if (s.elements.size() <= kInlineLimit) {
    json el = json::array();
    for (const auto& lam : s.elements) el.push_back(qvec_json(lam));
    report["elements"] = std::move(el);
  } else {
    report["elements_truncated"] = true;
  }
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) fail(Errc::validation_error, "cannot open CSV file: " + csv_path);
    write_points_csv(csv, s.elements, g.precision);
    report["csv"] = csv_path;
  }
  emit(report, g);
  return kExitPass;
}

int run_certify(const GlobalFlags& g, int grid_count, const std::string& csv_path) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  SpectrumPlan plan = plan_spectrum(p, t);
  json report;
  report["subcommand"] = "certify";
  report["problem"] = p.name;
  report["construction"] = plan.description;
  if (plan.conditions) {
    report["conditions"] = conditions_json(*plan.conditions);
    if (!plan.conditions->all_pass) {
      report["verdict"] = "FAIL";
      emit(report, g);
      return kExitFail;
    }
  }
  AffineIfs ifs(t.scaling, t.b_digits);
  std::vector<DVec> grid = default_grid(ifs, grid_count, p.analysis.seed);
  CertificationReport cert =
      parseval_certify(t.scaling, t.b_digits, plan.generator, grid,
                       p.analysis.spectrum_depth, p.analysis.product_depth,
                       p.analysis.tol_certify);
  report["spectrum_depth"] = cert.spectrum_depth;
  report["product_depth"] = cert.product_depth;
  report["product_tail_bound"] = cert.product_tail_bound;
  report["tol_certify"] = cert.tol;
  report["max_deviation"] = cert.max_deviation;
  report["monotone"] = cert.monotone;
  report["nested"] = cert.nested;
  report["duplicate_count"] = cert.duplicate_count;
  report["spectrum_sizes"] = cert.spectrum_sizes;
  report["verdict"] = cert.pass ? "PASS" : "FAIL";
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) fail(Errc::validation_error, "cannot open CSV file: " + csv_path);
    for (int i = 0; i < p.dimension; ++i) csv << "x" << (i + 1) << ",";
    csv << "partial_sum,deviation\n";
    char buf[64];
    for (size_t i = 0; i < cert.grid.size(); ++i) {
      for (double xi : cert.grid[i]) {
        std::snprintf(buf, sizeof buf, "%.*f,", g.precision, xi);
        csv << buf;
      }
      double s = cert.partial_sums[i].back();
      std::snprintf(buf, sizeof buf, "%.*f,%.*f\n", g.precision, s, g.precision,
                    std::abs(s - 1.0));
      csv << buf;
    }
    report["csv"] = csv_path;
  }
  emit(report, g);
  return cert.pass ? kExitPass : kExitFail;
}

int run_analyze_invariant(const GlobalFlags& g, std::optional<int> rank_flag) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  std::optional<int> rank = rank_flag ? rank_flag : p.analysis.subspace_rank;
  if (!rank)
    fail(Errc::validation_error, "subspace rank required (--rank or analysis.subspace_rank)");
  int r = *rank;
  QVec y0 = p.analysis.translate.value_or(QVec(p.dimension - r, Rat(0)));

  json report;
  report["subcommand"] = "analyze-invariant";
  report["problem"] = p.name;
  report["rank"] = r;
  report["y0"] = qvec_json(y0);

  TranslateCheck tc = check_invariant_translate(t, r, y0);
  json branches = json::array();
  for (size_t i = 0; i < tc.branches.size(); ++i) {
    const char* name = tc.branches[i] == TranslateBranch::maps_in    ? "maps_in"
                       : tc.branches[i] == TranslateBranch::vanishes ? "vanishes"
                                                                     : "neither";
    branches.push_back({{"digit", ivec_json(t.l_digits[i])},
                        {"branch", name},
                        {"image_translate", qvec_json(tc.image_translates[i])}});
  }
  report["translate_check"] = {{"invariant", tc.invariant}, {"branches", std::move(branches)}};

  json chains = json::array();
  bool others_escape = true;
  for (const auto& c : candidate_translates(t, r)) {
    if (c == y0) continue;
    EscapeChain chain = trace_escape(t, r, c);
    others_escape = others_escape && chain.verdict == ChainVerdict::escaped;
    chains.push_back(chain_json(chain));
  }
  report["escape_chains"] = std::move(chains);
  report["other_candidates_escape"] = others_escape;

  bool conditions_pass = true;
  if (p.analysis.lambda1_digits) {
    BlockDecomposition dec = decompose(t, r);
    SpectrumGenerator lambda1 = radix_spectrum_generator(dec.a1, *p.analysis.lambda1_digits);
    SubspaceConditionReport rep =
        check_theorem_conditions(t, r, y0, lambda1, p.analysis.lambda1_depth);
    report["conditions"] = conditions_json(rep);
    conditions_pass = rep.all_pass;
  }
  bool pass = tc.invariant && conditions_pass;
  report["verdict"] = pass ? "PASS" : "FAIL";
  emit(report, g);
  return pass ? kExitPass : kExitFail;
}

std::vector<InvariantSetSpec> parse_targets(const json& spec, int d) {
  std::vector<InvariantSetSpec> out;
  if (!spec.contains("targets") || !spec["targets"].is_array() || spec["targets"].empty())
    fail(Errc::parse_error, "invariant-set spec needs a non-empty targets array");
  for (const auto& jt : spec["targets"]) {
    std::string kind = jt.value("kind", std::string());
    if (kind == "subspace") {
      int rank = jt.at("rank").get<int>();
      if (rank < 1 || rank >= d)
        fail(Errc::validation_error, "target rank must satisfy 1 <= rank < dimension");
      DVec y0;
      for (const auto& e : jt.at("translate")) {
        if (e.is_string())
          y0.push_back(to_double(rat_from_string(e.get<std::string>())));
        else
          y0.push_back(e.get<double>());
      }
      if ((int)y0.size() != d - rank)
        fail(Errc::validation_error, "target translate must have length dimension - rank");
      InvariantSetSpec s = InvariantSetSpec::subspace(rank, y0, jt.value("tol", 1e-4));
      if (jt.contains("label")) s.label = jt["label"].get<std::string>();
      out.push_back(std::move(s));
    } else if (kind == "cycle") {
      InvariantSetSpec s;
      s.kind = InvariantSetSpec::Kind::cycle;
      s.distance_tol = jt.value("tol", 1e-6);
      s.label = jt.value("label", std::string("cycle"));
      for (const auto& jp : jt.at("points")) {
        DVec pt;
        for (const auto& e : jp) {
          if (e.is_string())
            pt.push_back(to_double(rat_from_string(e.get<std::string>())));
          else
            pt.push_back(e.get<double>());
        }
        if ((int)pt.size() != d)
          fail(Errc::validation_error, "cycle points must have the problem dimension");
        s.cycle_points.push_back(std::move(pt));
      }
      if (s.cycle_points.empty())
        fail(Errc::validation_error, "cycle target needs at least one point");
      out.push_back(std::move(s));
    } else if (kind == "full_space") {
      out.push_back(InvariantSetSpec::everything());
    } else {
      fail(Errc::parse_error, "unknown target kind: \"" + kind + "\"");
    }
  }
  return out;
}

json hf_json(const HfEstimate& e) {
  return {{"value", e.value},
          {"stderr", e.stderr_},
          {"classified", e.classified},
          {"n_paths", e.n_paths}};
}

int run_simulate_paths(const GlobalFlags& g, const std::string& targets_path) {
  ProblemFile p = load_problem(g);
  HadamardTriple t = to_triple(p);
  std::ifstream in(targets_path);
  if (!in) fail(Errc::parse_error, "cannot open invariant-set spec: " + targets_path);
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("invalid JSON in invariant-set spec: ") + e.what());
  }
  std::vector<InvariantSetSpec> targets = parse_targets(spec, p.dimension);
  DVec x;
  if (spec.contains("x")) {
    for (const auto& e : spec["x"]) x.push_back(e.get<double>());
    if ((int)x.size() != p.dimension)
      fail(Errc::validation_error, "start point x must have the problem dimension");
  } else {
    x = random_box_point(t, p.analysis.seed);
  }

  json report;
  report["subcommand"] = "simulate-paths";
  report["problem"] = p.name;
  report["x"] = x;
  report["n_paths"] = p.analysis.n_paths;
  report["n_steps"] = p.analysis.n_steps;
  report["seed"] = p.analysis.seed;

  TotalMassCheck mass = total_mass_check(x, t, targets, p.analysis.n_steps,
                                         p.analysis.n_paths, p.analysis.seed);
  json per = json::array();
  for (size_t i = 0; i < targets.size(); ++i) {
    json jt = hf_json(mass.per_target[i]);
    jt["label"] = targets[i].label;
    per.push_back(std::move(jt));
  }
  report["per_target"] = std::move(per);
  report["total_mass"] = {{"mass", mass.mass},
                          {"stderr", mass.stderr_},
                          {"unclassified_fraction", mass.unclassified_fraction},
                          {"pass", mass.pass}};

  RuelleCheck ruelle = ruelle_residual(x, t, targets.front(), p.analysis.n_steps,
                                       p.analysis.n_paths, p.analysis.seed);
  report["ruelle"] = {{"residual", ruelle.residual},
                      {"threshold", ruelle.threshold},
                      {"pass", ruelle.pass},
                      {"h_at_x", hf_json(ruelle.at_x)}};
  bool pass = mass.pass && ruelle.pass;
  report["verdict"] = pass ? "PASS" : "FAIL";
  emit(report, g);
  return pass ? kExitPass : kExitFail;
}

int run_conjugate(const GlobalFlags& g) {
  ProblemFile p = load_problem(g);
  if (!p.conjugation)
    fail(Errc::validation_error, "problem file has no conjugation matrix");
  HadamardTriple t = to_triple(p);
  UnimodularMatrix m(*p.conjugation);
  HadamardTriple conj = conjugate_triple(m, t);
  ProblemFile q;
  q.name = p.name + "-conjugated";
  q.dimension = p.dimension;
  q.scaling = conj.scaling.entries();
  q.digits_b = conj.b_digits.vectors();
  q.digits_l = conj.l_digits.vectors();
  q.analysis = p.analysis;
  emit_text(serialize_problem(q), g);
  std::cerr << "defect before " << t.defect << ", after " << conj.defect << "\n";
  return kExitPass;
}

int run_example51(const GlobalFlags& g, bool skip_montecarlo) {
  ProblemFile p = load_problem(g);
  PipelineOptions opt;
  opt.skip_montecarlo = skip_montecarlo;
  RunReport report = run_example51_pipeline(p, opt);
  emit_text(report.json_text, g);
  return report.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectral analysis of self-affine measures driven by Hadamard triples"};
  app.require_subcommand(1);

  GlobalFlags g_check, g_attr, g_muhat, g_cycles, g_spec, g_cert, g_inv, g_paths, g_conj,
      g_ex;
  bool print_matrix = false;
  int attr_depth = 6;
  std::string attr_csv, muhat_csv, spec_csv, cert_csv, targets_path;
  int muhat_grid = 64, cert_grid = 20;
  std::optional<int> rank_flag;
  bool skip_montecarlo = false;

  CLI::App* c1 = app.add_subcommand("check-hadamard", "verify Hadamard unitarity");
  add_common(c1, g_check);
  c1->add_flag("--print-matrix", print_matrix, "include the matrix in the report");

  CLI::App* c2 = app.add_subcommand("attractor", "enumerate attractor points");
  add_common(c2, g_attr);
  c2->add_option("--depth", attr_depth, "digit expansion depth");
  c2->add_option("--csv", attr_csv, "write points here as CSV");

  CLI::App* c3 = app.add_subcommand("mu-hat", "evaluate the measure transform on a grid");
  add_common(c3, g_muhat);
  c3->add_option("--grid", muhat_grid, "number of random grid points");
  c3->add_option("--csv", muhat_csv, "write the grid evaluation here as CSV");

  CLI::App* c4 = app.add_subcommand("find-cycles", "enumerate W_B-cycles");
  add_common(c4, g_cycles);

  CLI::App* c5 = app.add_subcommand("build-spectrum", "emit the truncated spectrum");
  add_common(c5, g_spec);
  c5->add_option("--csv", spec_csv, "write spectrum elements here as CSV");

  CLI::App* c6 = app.add_subcommand("certify", "certify Parseval sums on a grid");
  add_common(c6, g_cert);
  c6->add_option("--grid", cert_grid, "number of random grid points");
  c6->add_option("--csv", cert_csv, "write per-point sums here as CSV");

  CLI::App* c7 = app.add_subcommand("analyze-invariant", "invariant-subspace conditions");
  add_common(c7, g_inv);
  c7->add_option("--rank", rank_flag, "invariant subspace rank override");

  CLI::App* c8 = app.add_subcommand("simulate-paths", "path-measure statistics");
  add_common(c8, g_paths);
  c8->add_option("--targets", targets_path, "invariant-set spec file (JSON)")->required();

  CLI::App* c9 = app.add_subcommand("conjugate", "emit the conjugated problem");
  add_common(c9, g_conj);

  CLI::App* c10 = app.add_subcommand("example51", "end-to-end evidence pipeline");
  add_common(c10, g_ex);
  c10->add_flag("--skip-montecarlo", skip_montecarlo, "deterministic stages only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c1->parsed()) return run_check_hadamard(g_check, print_matrix);
    if (c2->parsed()) return run_attractor(g_attr, attr_depth, attr_csv);
    if (c3->parsed()) return run_mu_hat(g_muhat, muhat_grid, muhat_csv);
    if (c4->parsed()) return run_find_cycles(g_cycles);
    if (c5->parsed()) return run_build_spectrum(g_spec, spec_csv);
    if (c6->parsed()) return run_certify(g_cert, cert_grid, cert_csv);
    if (c7->parsed()) return run_analyze_invariant(g_inv, rank_flag);
    if (c8->parsed()) return run_simulate_paths(g_paths, targets_path);
    if (c9->parsed()) return run_conjugate(g_conj);
    if (c10->parsed()) return run_example51(g_ex, skip_montecarlo);
  } catch (const ifspec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
