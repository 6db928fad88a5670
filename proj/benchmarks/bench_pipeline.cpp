// Micro benchmarks for the stages of one query on the reference mesh.

#include <sbmrom/pipeline.hpp>

#include <benchmark/benchmark.h>

#include <memory>

namespace {

using namespace sbmrom;

struct Fixture {
  BackgroundMesh mesh{{-2.0, 2.0, -1.0, 1.0}, 0.035};
  EmbeddedShape shape = EmbeddedShape::rectangle_ycenter();
  ProblemData problem;
  OperatorPattern pattern{mesh};
  FullOrderModel fom{mesh, shape, problem};
  SnapshotSet snapshots;
  PodBasis basis;

  Fixture() {
    const auto mus = sample_parameters(shape.range(), 120, 2018);
    snapshots.S.resize(mesh.num_nodes(), static_cast<Eigen::Index>(mus.size()));
    for (std::size_t k = 0; k < mus.size(); ++k) snapshots.S.col(k) = fom.solve(mus[k]).T;
    snapshots.parameters = mus;
    snapshots.mass = std::make_shared<const SparseMatrix>(assemble_mass(mesh));
    basis = pod(snapshots);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_Classify(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(classify(f.mesh, f.shape, 0.21));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  Fixture& f = fixture();
  const SurrogateMap map = classify(f.mesh, f.shape, 0.21);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(f.mesh, map, f.problem, f.pattern));
}
BENCHMARK(BM_Assemble)->Unit(benchmark::kMillisecond);

void BM_FomSolve(benchmark::State& state) {
  Fixture& f = fixture();
  const FomSystem system = f.fom.system(0.21);
  const SolverKind kind = state.range(0) == 0 ? SolverKind::Cholesky : SolverKind::ConjugateGradient;
  for (auto _ : state) benchmark::DoNotOptimize(solve(system, kind));
}
BENCHMARK(BM_FomSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ProjectAndSolve(benchmark::State& state) {
  Fixture& f = fixture();
  const FomSystem system = f.fom.system(0.21);
  const int modes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_reduced(project(system, f.basis, modes)));
  }
}
BENCHMARK(BM_ProjectAndSolve)->Arg(2)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Pod(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(pod(f.snapshots));
}
BENCHMARK(BM_Pod)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
