#include <benchmark/benchmark.h>

#include <vector>

#include "gibbs/basis.hpp"
#include "gibbs/diagnostics.hpp"
#include "gibbs/generators.hpp"
#include "gibbs/losses.hpp"
#include "gibbs/sampler.hpp"

namespace {

using namespace gibbs;

void BM_CubicBasis(benchmark::State& state) {
  const BasisSpec basis{CubicBSpline{0.0, 3.0, static_cast<int>(state.range(0))}};
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_basis(basis, x));
    x = x > 2.99 ? 0.0 : x + 0.001;
  }
}
BENCHMARK(BM_CubicBasis)->Arg(6)->Arg(25);

void BM_DesignMatrix(benchmark::State& state) {
  const BasisSpec basis{TensorBSpline{{0.0, 3.0, 4}, {0.0, 3.0, 4}}};
  Rng rng(1);
  Eigen::MatrixXd points(state.range(0), 2);
  for (Eigen::Index i = 0; i < points.size(); ++i) points.data()[i] = rng.uniform(0.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(design_matrix(basis, points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DesignMatrix)->Arg(1000);

void BM_McidRisk(benchmark::State& state) {
  const BasisSpec basis{CubicBSpline{0.0, 3.0, 6}};
  Rng rng(2);
  const Dataset data = generate(Mcid1Sim{}, static_cast<std::size_t>(state.range(0)), rng).data;
  const RiskEvaluator eval(McidLoss{basis}, data);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(6, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval(theta));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McidRisk)->Arg(100)->Arg(1000);

void BM_AucRisk(benchmark::State& state) {
  Rng rng(3);
  const Dataset data = generate(AucSim{}, static_cast<std::size_t>(state.range(0)), rng).data;
  const RiskEvaluator eval(AucLoss{}, data);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(eval(theta));
}
BENCHMARK(BM_AucRisk)->Arg(200)->Arg(2000);

void BM_MhSteps(benchmark::State& state) {
  Rng rng(4);
  const Dataset data = generate(QuantileRegSim{}, 800, rng).data;
  const GibbsTarget target(CheckLoss{0.5, RawDictionary::from_terms({"1", "x"})},
                           PriorSpec{GaussianIid{0.0, 10.0, 2}}, data, 1.0);
  MHConfig mh;
  mh.steps = 2000;
  mh.burn_in = 0;
  mh.thin = 1;
  mh.proposal_scale = Eigen::VectorXd::Constant(1, 0.07);
  for (auto _ : state) benchmark::DoNotOptimize(mh_run(target, mh));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_MhSteps)->Unit(benchmark::kMillisecond);

void BM_DivergenceTrace(benchmark::State& state) {
  const BasisSpec basis{CubicBSpline{0.0, 1.0, 8}};
  Chain chain;
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd theta(8);
    for (Eigen::Index j = 0; j < 8; ++j) theta(j) = rng.normal();
    chain.draws.push_back(theta);
  }
  const Divergence div = EmpiricalL2{basis, Eigen::VectorXd::LinSpaced(400, 0.0, 1.0)};
  const Comparand star = Eigen::VectorXd(Eigen::VectorXd::Zero(8));
  for (auto _ : state) benchmark::DoNotOptimize(divergence_trace(div, chain, star));
}
BENCHMARK(BM_DivergenceTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
