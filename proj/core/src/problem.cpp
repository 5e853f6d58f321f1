#include "ifspec/problem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ifspec {

namespace {

using nlohmann::json;

IMat parse_int_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    fail(Errc::parse_error, field + " must be a non-empty array of integer rows");
  int rows = (int)j.size();
  int cols = (int)j[0].size();
  IMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if ((int)j[i].size() != cols)
      fail(Errc::parse_error, field + " rows must all have the same length");
    for (int k = 0; k < cols; ++k) {
      if (!j[i][k].is_number_integer())
        fail(Errc::parse_error, field + " entries must be integers");
      m(i, k) = Int(j[i][k].get<long long>());
    }
  }
  return m;
}

std::vector<IVec> parse_digit_list(const json& j, const std::string& field, int d) {
  if (!j.is_array() || j.empty())
    fail(Errc::parse_error, field + " must be a non-empty array of integer vectors");
  std::vector<IVec> out;
  for (const auto& row : j) {
    if (!row.is_array() || (int)row.size() != d)
      fail(Errc::validation_error,
           field + " vectors must have length " + std::to_string(d));
    IVec v(d);
    for (int i = 0; i < d; ++i) {
      if (!row[i].is_number_integer())
        fail(Errc::parse_error, field + " entries must be integers");
      v[i] = Int(row[i].get<long long>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

json matrix_to_json(const IMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < m.cols(); ++j2) row.push_back((long long)m(i, j2));
    rows.push_back(std::move(row));
  }
  return rows;
}

json digits_to_json(const std::vector<IVec>& ds) {
  json rows = json::array();
  for (const auto& v : ds) {
    json row = json::array();
    for (const auto& x : v) row.push_back((long long)x);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool contains_zero(const std::vector<IVec>& ds) {
  for (const auto& v : ds)
    if (std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; })) return true;
  return false;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::parse_error, "problem file must be a JSON object");

  ProblemFile p;
  p.name = j.value("name", std::string("unnamed"));
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    fail(Errc::parse_error, "dimension (integer) is required");
  p.dimension = j["dimension"].get<int>();
  if (p.dimension < 1) fail(Errc::validation_error, "dimension must be >= 1");

  if (!j.contains("scaling")) fail(Errc::parse_error, "scaling matrix R is required");
  p.scaling = parse_int_matrix(j["scaling"], "scaling");
  if (p.scaling.rows() != p.dimension || p.scaling.cols() != p.dimension)
    fail(Errc::validation_error, "scaling must be dimension x dimension");

  if (!j.contains("digits_b") || !j.contains("digits_l"))
    fail(Errc::parse_error, "digits_b and digits_l are required");
  p.digits_b = parse_digit_list(j["digits_b"], "digits_b", p.dimension);
  p.digits_l = parse_digit_list(j["digits_l"], "digits_l", p.dimension);

  // validation mirrors the standing assumptions, with actionable names
  ExpandingCheck ec = is_expanding(p.scaling);
  if (!ec.expanding)
    fail(Errc::validation_error,
         "not expanding: |eigenvalue| = " + std::to_string(ec.min_modulus) + " <= 1");
  if (!contains_zero(p.digits_b)) fail(Errc::validation_error, "0 in B required");
  if (!contains_zero(p.digits_l)) fail(Errc::validation_error, "0 in L required");
  if (p.digits_b.size() != p.digits_l.size())
    fail(Errc::validation_error, "#B != #L: " + std::to_string(p.digits_b.size()) + " vs " +
                                     std::to_string(p.digits_l.size()));

  if (j.contains("conjugation")) {
    IMat m = parse_int_matrix(j["conjugation"], "conjugation");
    if (m.rows() != p.dimension || m.cols() != p.dimension)
      fail(Errc::validation_error, "conjugation must be dimension x dimension");
    (void)UnimodularMatrix(m);  // throws NonUnimodular when |det| != 1
    p.conjugation = m;
  }

  if (j.contains("analysis")) {
    const json& a = j["analysis"];
    if (!a.is_object()) fail(Errc::parse_error, "analysis must be an object");
    AnalysisParams& ap = p.analysis;
    ap.product_depth = a.value("product_depth", ap.product_depth);
    ap.spectrum_depth = a.value("spectrum_depth", ap.spectrum_depth);
    ap.cycle_max_len = a.value("cycle_max_len", ap.cycle_max_len);
    ap.n_paths = a.value("n_paths", ap.n_paths);
    ap.n_steps = a.value("n_steps", ap.n_steps);
    ap.seed = a.value("seed", ap.seed);
    ap.tol_unitary = a.value("tol_unitary", ap.tol_unitary);
    ap.tol_certify = a.value("tol_certify", ap.tol_certify);
    ap.lambda1_depth = a.value("lambda1_depth", ap.lambda1_depth);
    if (a.contains("subspace_rank")) {
      int r = a["subspace_rank"].get<int>();
      if (r < 1 || r >= p.dimension)
        fail(Errc::validation_error, "subspace_rank must satisfy 1 <= r < dimension");
      ap.subspace_rank = r;
    }
    if (a.contains("translate")) {
      const json& t = a["translate"];
      if (!t.is_array()) fail(Errc::parse_error, "translate must be an array of rationals");
      QVec y;
      for (const auto& e : t) {
        if (e.is_string())
          y.push_back(rat_from_string(e.get<std::string>()));
        else if (e.is_number_integer())
          y.push_back(Rat(e.get<long long>()));
        else
          fail(Errc::parse_error, "translate entries must be \"p/q\" strings or integers");
      }
      if (ap.subspace_rank && (int)y.size() != p.dimension - *ap.subspace_rank)
        fail(Errc::validation_error, "translate must have length dimension - subspace_rank");
      ap.translate = std::move(y);
    }
    if (a.contains("lambda1_digits")) {
      int r = ap.subspace_rank.value_or(p.dimension);
      ap.lambda1_digits = parse_digit_list(a["lambda1_digits"], "lambda1_digits", r);
    }
  }
  return p;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open problem file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

std::string serialize_problem(const ProblemFile& p) {
  json j;
  j["name"] = p.name;
  j["dimension"] = p.dimension;
  j["scaling"] = matrix_to_json(p.scaling);
  j["digits_b"] = digits_to_json(p.digits_b);
  j["digits_l"] = digits_to_json(p.digits_l);
  if (p.conjugation) j["conjugation"] = matrix_to_json(*p.conjugation);
  json a;
  const AnalysisParams& ap = p.analysis;
  a["product_depth"] = ap.product_depth;
  a["spectrum_depth"] = ap.spectrum_depth;
  a["cycle_max_len"] = ap.cycle_max_len;
  a["n_paths"] = ap.n_paths;
  a["n_steps"] = ap.n_steps;
  a["seed"] = ap.seed;
  a["tol_unitary"] = ap.tol_unitary;
  a["tol_certify"] = ap.tol_certify;
  a["lambda1_depth"] = ap.lambda1_depth;
  if (ap.subspace_rank) a["subspace_rank"] = *ap.subspace_rank;
  if (ap.translate) {
    json t = json::array();
    for (const auto& q : *ap.translate) t.push_back(rat_to_string(q));
    a["translate"] = std::move(t);
  }
  if (ap.lambda1_digits) a["lambda1_digits"] = digits_to_json(*ap.lambda1_digits);
  j["analysis"] = std::move(a);
  return j.dump(2) + "\n";
}

HadamardTriple to_triple(const ProblemFile& p) {
  return HadamardTriple(ExpandingMatrix(p.scaling), DigitSet(p.dimension, p.digits_b),
                        DigitSet(p.dimension, p.digits_l));
}

SpectrumGenerator radix_spectrum_generator(const IMat& a, std::vector<IVec> digits) {
  QMat aq = to_rational(a);
  return [aq, digits = std::move(digits)](int depth) {
    SpectrumApprox out;
    out.depth = depth;
    std::vector<QVec> cur{QVec(aq.rows(), Rat(0))};
    for (int k = 0; k < depth; ++k) {
      std::vector<QVec> next;
      next.reserve(cur.size() * digits.size());
      for (const auto& v : cur) {
        QVec av = aq * v;
        for (const auto& dg : digits) next.push_back(av + to_rational(dg));
      }
      std::sort(next.begin(), next.end(), lex_less);
      next.erase(std::unique(next.begin(), next.end()), next.end());
      cur = std::move(next);
    }
    out.elements = std::move(cur);
    out.provenance = "radix spectrum, depth " + std::to_string(depth);
    return out;
  };
}

}  // namespace ifspec
