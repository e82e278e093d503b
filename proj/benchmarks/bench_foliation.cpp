#include <benchmark/benchmark.h>

#include "foliation/flow.hpp"
#include "foliation/gaussmanin.hpp"
#include "foliation/melnikov.hpp"
#include "foliation/monodromy.hpp"
#include "foliation/parser.hpp"
#include "foliation/resultant.hpp"
#include "foliation/singularities.hpp"

#include <string>
#include <vector>

namespace {

using namespace fol;

const std::vector<std::string> kXY{"x", "y"};

Poly P2(const char* s) { return parse_poly(s, kXY); }

// x^n - x + 1/3 and its relatives keep distinct critical values.
UPoly test_polynomial(int n) {
  std::vector<Rational> c(n + 1);
  c[0] = Rational(1, 3);
  c[1] = -1;
  if (n > 3) c[2] = Rational(1, 5);
  c[n] = 1;
  for (auto& r : c) r.canonicalize();
  return UPoly(c);
}

void BM_ParsePrint(benchmark::State& state) {
  const std::string text = "3/7*x^5*y - 2*x^2*y^3 + x*y^4 - 11/2*y^2 + x - 1";
  for (auto _ : state) {
    const Poly p = parse_poly(text, kXY);
    benchmark::DoNotOptimize(print_poly(p, kXY));
  }
}
BENCHMARK(BM_ParsePrint);

void BM_Resultant(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Poly a = P2(("x^" + std::to_string(d) + " + y^2*x - 3*y + 1").c_str());
  const Poly b = P2(("y^" + std::to_string(d) + " - x*y + 2*x^2 - 1").c_str());
  for (auto _ : state) benchmark::DoNotOptimize(resultant(a, b, 1));
}
BENCHMARK(BM_Resultant)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SingularitiesTriangle(benchmark::State& state) {
  const LogarithmicSpec spec{{P2("x"), P2("y"), P2("1 - x - y")}, {Rational(1), Rational(1), Rational(1)}};
  const auto F = logarithmic(spec);
  for (auto _ : state) benchmark::DoNotOptimize(find_singularities(F));
}
BENCHMARK(BM_SingularitiesTriangle)->Unit(benchmark::kMillisecond);

void BM_TraceCycle(benchmark::State& state) {
  const auto F = hamiltonian(P2("1/2*x^2 + 2*y^2 + 1/4*x^4"));
  const auto sigma = Transversal::gradient_section(*F.first_integral, {0.5, 0}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(trace_cycle(F, sigma, 0.5));
}
BENCHMARK(BM_TraceCycle)->Unit(benchmark::kMicrosecond);

void BM_MelnikovSample(benchmark::State& state) {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  const auto sigma = Transversal::gradient_section(*F.first_integral, {1, 0}, 2);
  const auto problem = make_melnikov_problem(F, DifferentialForm::from_dx_dy(P2("x^2*y"), P2("x*y^2 - x^3")), sigma);
  for (auto _ : state) benchmark::DoNotOptimize(m1(problem, 0.5));
}
BENCHMARK(BM_MelnikovSample)->Unit(benchmark::kMicrosecond);

void BM_MonodromyGenerators(benchmark::State& state) {
  const UPoly p = test_polynomial(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto model = build_model(p);
    benchmark::DoNotOptimize(monodromy_generators(model));
  }
}
BENCHMARK(BM_MonodromyGenerators)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

void BM_PicardFuchs(benchmark::State& state) {
  const UPoly p = test_polynomial(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(picard_fuchs(p));
}
BENCHMARK(BM_PicardFuchs)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_BrieskornReduce(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto omega = DifferentialForm::from_dx_dy(P2("x^7*y^3 - 2*x^2*y^5 + y"), P2("x^4*y^2 + 3*x^6"));
  for (auto _ : state) benchmark::DoNotOptimize(brieskorn_reduce(m, omega));
}
BENCHMARK(BM_BrieskornReduce)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
