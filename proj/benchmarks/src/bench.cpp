#include <benchmark/benchmark.h>

#include "ifspec/cycles.hpp"
#include "ifspec/ifs.hpp"
#include "ifspec/paths.hpp"
#include "ifspec/problem.hpp"
#include "ifspec/subspace.hpp"

namespace {

using namespace ifspec;

IMat imat2(int a, int b, int c, int d) {
  IMat m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

DigitSet digits2(std::initializer_list<std::pair<int, int>> rows) {
  std::vector<IVec> vs;
  for (auto [a, b] : rows) vs.push_back(IVec{Int(a), Int(b)});
  return DigitSet(2, std::move(vs));
}

HadamardTriple plane() {
  return HadamardTriple(ExpandingMatrix(imat2(4, 0, 0, 4)),
                        digits2({{0, 0}, {0, 2}, {1, 4}, {1, 6}}),
                        digits2({{0, 0}, {2, 0}, {2, 1}, {0, 5}}));
}

HadamardTriple cantor() {
  IMat r(1, 1);
  r(0, 0) = 4;
  return HadamardTriple(ExpandingMatrix(r), DigitSet(1, {IVec{Int(0)}, IVec{Int(1)}}),
                        DigitSet(1, {IVec{Int(0)}, IVec{Int(2)}}));
}

SpectrumGenerator quarter_radix() {
  IMat a(1, 1);
  a(0, 0) = 4;
  return radix_spectrum_generator(a, {IVec{Int(0)}, IVec{Int(2)}});
}

void BM_HadamardMatrix(benchmark::State& state) {
  HadamardTriple t = plane();
  for (auto _ : state)
    benchmark::DoNotOptimize(hadamard_matrix(t.scaling, t.b_digits, t.l_digits));
}
BENCHMARK(BM_HadamardMatrix);

void BM_MuHatEval(benchmark::State& state) {
  HadamardTriple t = plane();
  MuHatEvaluator ev(t.scaling, t.b_digits);
  DVec x{0.37, 0.81};
  for (auto _ : state) benchmark::DoNotOptimize(ev.eval(x, (int)state.range(0)));
}
BENCHMARK(BM_MuHatEval)->Arg(0)->Arg(8)->Arg(16);

void BM_MuHatEvalSq(benchmark::State& state) {
  HadamardTriple t = plane();
  MuHatEvaluator ev(t.scaling, t.b_digits);
  DVec x{17.25, -42.5};
  for (auto _ : state) benchmark::DoNotOptimize(ev.eval_sq(x, 0, 1e-15));
}
BENCHMARK(BM_MuHatEvalSq);

void BM_PartitionResidual(benchmark::State& state) {
  HadamardTriple t = plane();
  ExpandingMatrix s = t.dual();
  DVec x{0.37, 0.81};
  for (auto _ : state)
    benchmark::DoNotOptimize(partition_residual(t.b_digits, t.l_digits, s, x));
}
BENCHMARK(BM_PartitionResidual);

void BM_ParsevalCertify(benchmark::State& state) {
  HadamardTriple t = cantor();
  SpectrumGenerator gen = quarter_radix();
  std::vector<DVec> grid{{0.0}, {0.21}, {0.37}, {0.63}, {0.81}};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        parseval_certify(t.scaling, t.b_digits, gen, grid, (int)state.range(0), 0, 1e-2));
}
BENCHMARK(BM_ParsevalCertify)->Arg(4)->Arg(6)->Arg(8);

void BM_SubspaceSpectrum(benchmark::State& state) {
  HadamardTriple t = plane();
  SpectrumGenerator lam1 = quarter_radix();
  SubspaceConditionReport cond = check_theorem_conditions(t, 1, {Rat(0)}, lam1, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        subspace_spectrum(t, 1, {Rat(0)}, lam1, 3, (int)state.range(0), cond));
}
BENCHMARK(BM_SubspaceSpectrum)->Arg(2)->Arg(4);

void BM_CycleEnumeration(benchmark::State& state) {
  HadamardTriple t = plane();
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_wb_cycles(t.scaling, t.b_digits, t.l_digits, 4));
}
BENCHMARK(BM_CycleEnumeration);

void BM_ColumnHnf(benchmark::State& state) {
  IMat g(3, 4);
  int vals[12] = {6, 2, -7, 4, 0, 5, 9, -3, 8, 1, 2, 11};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = vals[i * 4 + j];
  for (auto _ : state) benchmark::DoNotOptimize(column_hnf(g));
}
BENCHMARK(BM_ColumnHnf);

void BM_SimulatePaths(benchmark::State& state) {
  HadamardTriple t = plane();
  std::vector<InvariantSetSpec> targets{InvariantSetSpec::subspace(1, DVec{0.0})};
  DVec x{0.37, 0.81};
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_paths(x, t, 32, (int)state.range(0), 99, targets));
}
BENCHMARK(BM_SimulatePaths)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
