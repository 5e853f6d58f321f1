#pragma once

#include <initializer_list>
#include <vector>

#include "ifspec/fourier.hpp"
#include "ifspec/hadamard.hpp"

namespace ifspec::testing {

inline IMat int_matrix(int rows, int cols, std::initializer_list<int> entries) {
  IMat m(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Int(*it++);
  return m;
}

inline IVec ivec(std::initializer_list<int> entries) {
  IVec v;
  for (int e : entries) v.push_back(Int(e));
  return v;
}

inline QVec qvec(std::initializer_list<const char*> entries) {
  QVec v;
  for (const char* e : entries) v.push_back(rat_from_string(e));
  return v;
}

inline DigitSet digit_set(int dim, std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<IVec> vs;
  for (const auto& r : rows) vs.push_back(ivec(r));
  return DigitSet(dim, std::move(vs));
}

// R = diag(4,4), B = {(0,0),(0,2),(1,4),(1,6)}, L = {(0,0),(2,0),(2,1),(0,5)}
inline HadamardTriple plane_triple() {
  return HadamardTriple(ExpandingMatrix(int_matrix(2, 2, {4, 0, 0, 4})),
                        digit_set(2, {{0, 0}, {0, 2}, {1, 4}, {1, 6}}),
                        digit_set(2, {{0, 0}, {2, 0}, {2, 1}, {0, 5}}));
}

// R = 4, B = {0,1}, L = {0,2}: the quarter-Cantor pair
inline HadamardTriple cantor_triple() {
  return HadamardTriple(ExpandingMatrix(int_matrix(1, 1, {4})), digit_set(1, {{0}, {1}}),
                        digit_set(1, {{0}, {2}}));
}

// R = 4, B = {0,2}, L = {0,2}: fails unitarity (defect 1)
inline HadamardTriple control_triple() {
  return HadamardTriple(ExpandingMatrix(int_matrix(1, 1, {4})), digit_set(1, {{0}, {2}}),
                        digit_set(1, {{0}, {2}}));
}

// radix truncations { sum_{k<n} 4^k a_k : a_k in {0,2} }, nested by a_k = 0;
// the canonical spectrum of the quarter-Cantor measure
inline SpectrumGenerator cantor_lambda1() {
  return [](int depth) {
    std::vector<QVec> cur{{Rat(0)}};
    for (int n = 0; n < depth; ++n) {
      std::vector<QVec> next;
      for (const auto& v : cur) {
        next.push_back({v[0] * Rat(4)});
        next.push_back({v[0] * Rat(4) + Rat(2)});
      }
      cur = std::move(next);
    }
    SpectrumApprox s;
    s.depth = depth;
    s.elements = std::move(cur);
    return s;
  };
}

}  // namespace ifspec::testing
