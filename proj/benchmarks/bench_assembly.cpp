#include <benchmark/benchmark.h>

#include "lmles/diagnostics/taylor_green.hpp"
#include "lmles/forms/form_assembler.hpp"

namespace {

using namespace lmles;

Eigen::Vector2d vortex(const Point& x) { return taylor_green_exact(1.0, 100.0, x.x(), x.y(), 0.0).velocity; }

struct Problem {
  std::shared_ptr<const FunctionSpace> v, q;
  FeField w;

  explicit Problem(int m)
      : v(build_space(std::make_shared<const Mesh>(unit_square_mesh(m)), Family::VectorP2)),
        q(build_space(v->mesh_ptr(), Family::ScalarP1)),
        w(interpolate(v, vortex)) {}
};

void BM_Mass(benchmark::State& state) {
  Problem p(static_cast<int>(state.range(0)));
  FormAssembler fa(p.v, p.q);
  for (auto _ : state) benchmark::DoNotOptimize(fa.mass());
}
BENCHMARK(BM_Mass)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_NonlinearNewton(benchmark::State& state) {
  Problem p(static_cast<int>(state.range(0)));
  FormAssembler fa(p.v, p.q);
  ModelParams params;
  params.formulation = state.range(1) ? Formulation::Emac : Formulation::Skew;
  for (auto _ : state) benchmark::DoNotOptimize(fa.nonlinear(p.w, params, Linearization::Newton));
}
BENCHMARK(BM_NonlinearNewton)->Args({16, 1})->Args({32, 1})->Args({32, 0})->Unit(benchmark::kMillisecond);

void BM_NonlinearResidual(benchmark::State& state) {
  Problem p(static_cast<int>(state.range(0)));
  FormAssembler fa(p.v, p.q);
  ModelParams params;
  for (auto _ : state) benchmark::DoNotOptimize(fa.nonlinear(p.w, params, Linearization::None));
}
BENCHMARK(BM_NonlinearResidual)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
