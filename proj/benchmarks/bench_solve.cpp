#include <benchmark/benchmark.h>

#include "lmles/diagnostics/taylor_green.hpp"
#include "lmles/stepper/time_stepper.hpp"

namespace {

using namespace lmles;

Eigen::Vector2d vortex(const Point& x, double t) {
  return taylor_green_exact(1.0, 100.0, x.x(), x.y(), t).velocity;
}

TimeStepper make_stepper(int m, bool reuse) {
  TimeConfig c;
  c.reuse_jacobian = reuse;
  return TimeStepper(std::make_shared<const Mesh>(unit_square_mesh(m)), ModelParams{},
                     BoundaryConditions::dirichlet(vortex), c, {}, [](const std::string&) {});
}

// Factorization plus solve of one Newton matrix.
void BM_FactorizeSolve(benchmark::State& state) {
  TimeStepper st = make_stepper(static_cast<int>(state.range(0)), false);
  const SolverState s = st.initial_state([](const Point& x) { return vortex(x, 0.0); });
  const StepSystem sys = st.build_system(s, s.velocity, s.pressure);
  SaddlePointSolver solver;
  for (auto _ : state) {
    solver.factorize(sys.jacobian);
    benchmark::DoNotOptimize(solver.solve_factored(sys.residual));
  }
}
BENCHMARK(BM_FactorizeSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// One full Crank-Nicolson step, with and without Jacobian reuse.
void BM_Step(benchmark::State& state) {
  TimeStepper st = make_stepper(static_cast<int>(state.range(0)), state.range(1) != 0);
  const SolverState s = st.initial_state([](const Point& x) { return vortex(x, 0.0); });
  for (auto _ : state) benchmark::DoNotOptimize(st.advance(s));
}
BENCHMARK(BM_Step)->Args({16, 0})->Args({16, 1})->Args({32, 0})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
