#include <doctest.h>

#include "ifspec/problem.hpp"

#include "helpers.hpp"

using namespace ifspec;
using namespace ifspec::testing;

namespace {

const char* kPlane = R"({
  "name": "plane",
  "dimension": 2,
  "scaling": [[4, 0], [0, 4]],
  "digits_b": [[0, 0], [0, 2], [1, 4], [1, 6]],
  "digits_l": [[0, 0], [2, 0], [2, 1], [0, 5]],
  "conjugation": [[4, -1], [1, 0]],
  "analysis": {
    "subspace_rank": 1,
    "translate": ["0"],
    "lambda1_digits": [[0], [2]],
    "lambda1_depth": 6,
    "spectrum_depth": 6
  }
})";

}  // namespace

TEST_CASE("problem parsing recovers the plane data") {
  ProblemFile p = parse_problem_text(kPlane);
  CHECK(p.name == "plane");
  CHECK(p.dimension == 2);
  CHECK(p.scaling(0, 0) == Int(4));
  CHECK(p.scaling(0, 1) == Int(0));
  REQUIRE(p.digits_b.size() == 4);
  CHECK(p.digits_b[2] == ivec({1, 4}));
  REQUIRE(p.digits_l.size() == 4);
  CHECK(p.digits_l[3] == ivec({0, 5}));
  REQUIRE(p.conjugation.has_value());
  CHECK((*p.conjugation)(0, 1) == Int(-1));
  CHECK((*p.conjugation)(1, 0) == Int(1));
  REQUIRE(p.analysis.subspace_rank.has_value());
  CHECK(*p.analysis.subspace_rank == 1);
  REQUIRE(p.analysis.translate.has_value());
  CHECK(*p.analysis.translate == qvec({"0"}));
  REQUIRE(p.analysis.lambda1_digits.has_value());
  CHECK(p.analysis.lambda1_digits->size() == 2);
  CHECK(p.analysis.lambda1_depth == 6);
  CHECK(p.analysis.spectrum_depth == 6);
}

TEST_CASE("defaults survive a round trip") {
  ProblemFile p = parse_problem_text(kPlane);
  CHECK(p.analysis.product_depth == 0);
  CHECK(p.analysis.n_paths == 100000);
  CHECK(p.analysis.n_steps == 64);
  CHECK(p.analysis.seed == 1);
  CHECK(p.analysis.tol_unitary == 1e-12);
  CHECK(p.analysis.tol_certify == 1e-2);
}

TEST_CASE("serialization is idempotent") {
  ProblemFile p = parse_problem_text(kPlane);
  std::string s1 = serialize_problem(p);
  ProblemFile p2 = parse_problem_text(s1);
  std::string s2 = serialize_problem(p2);
  CHECK(s1 == s2);
}

TEST_CASE("rational translate strings parse") {
  const char* text = R"({
    "dimension": 2,
    "scaling": [[4, 0], [0, 4]],
    "digits_b": [[0, 0], [0, 2]],
    "digits_l": [[0, 0], [2, 0]],
    "analysis": {"subspace_rank": 1, "translate": ["-3/2"]}
  })";
  ProblemFile p = parse_problem_text(text);
  REQUIRE(p.analysis.translate.has_value());
  CHECK(*p.analysis.translate == qvec({"-3/2"}));
}

TEST_CASE("integer translate entries parse") {
  const char* text = R"({
    "dimension": 2,
    "scaling": [[4, 0], [0, 4]],
    "digits_b": [[0, 0], [0, 2]],
    "digits_l": [[0, 0], [2, 0]],
    "analysis": {"subspace_rank": 1, "translate": [2]}
  })";
  ProblemFile p = parse_problem_text(text);
  CHECK(*p.analysis.translate == qvec({"2"}));
}

TEST_CASE("validation failures carry their assumption") {
  auto expect = [](const char* text, Errc code) {
    try {
      parse_problem_text(text);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  // not valid JSON at all
  expect("{", Errc::parse_error);
  // missing dimension
  expect(R"({"scaling": [[4]], "digits_b": [[0]], "digits_l": [[0]]})", Errc::parse_error);
  // scaling not expanding
  expect(R"({"dimension": 1, "scaling": [[1]], "digits_b": [[0]], "digits_l": [[0]]})",
         Errc::validation_error);
  // 0 missing from B
  expect(R"({"dimension": 1, "scaling": [[4]], "digits_b": [[1], [2]],
             "digits_l": [[0], [2]]})",
         Errc::validation_error);
  // cardinality mismatch
  expect(R"({"dimension": 1, "scaling": [[4]], "digits_b": [[0], [1]],
             "digits_l": [[0]]})",
         Errc::validation_error);
  // wrong translate length
  expect(R"({"dimension": 2, "scaling": [[4,0],[0,4]], "digits_b": [[0,0],[0,2]],
             "digits_l": [[0,0],[2,0]],
             "analysis": {"subspace_rank": 1, "translate": ["0", "0"]}})",
         Errc::validation_error);
}

TEST_CASE("to_triple matches the hand-built plane triple") {
  ProblemFile p = parse_problem_text(kPlane);
  HadamardTriple t = to_triple(p);
  HadamardTriple want = plane_triple();
  CHECK(t.defect == want.defect);
  CHECK(t.b_digits.vectors() == want.b_digits.vectors());
  CHECK(t.l_digits.vectors() == want.l_digits.vectors());
}

TEST_CASE("radix spectrum generator grows nested truncations") {
  SpectrumGenerator gen =
      radix_spectrum_generator(int_matrix(1, 1, {4}), {ivec({0}), ivec({2})});
  SpectrumApprox s3 = gen(3);
  REQUIRE(s3.elements.size() == 8);
  std::vector<const char*> want{"0", "2", "8", "10", "32", "34", "40", "42"};
  for (size_t i = 0; i < want.size(); ++i) CHECK(s3.elements[i] == qvec({want[i]}));

  SpectrumApprox s0 = gen(0);
  REQUIRE(s0.elements.size() == 1);
  CHECK(s0.elements[0] == qvec({"0"}));
}
