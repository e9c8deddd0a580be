#include <benchmark/benchmark.h>

#include "robustcbf/plants.hpp"
#include "robustcbf/sim.hpp"
#include "robustcbf/solvers.hpp"

using namespace rcbf;

namespace {

ScenarioConfig actuator_cfg() {
    ScenarioConfig cfg;
    cfg.plant = PlantKind::Actuator;
    cfg.filter = FilterKind::UeHocbfQp;
    cfg.compensate_matched = true;
    cfg.duration = 1.0;
    cfg.control_rate = 100.0;
    cfg.substeps = 10;
    cfg.initial_state = {0.0, 0.5, 0.0, -0.2};
    cfg.estimator_gain = Matrix::identity(4).scaled(5.0);
    cfg.estimator_weight = Matrix::identity(4);
    cfg.uncertainty_bound = 0.9;
    cfg.rate_bound = 1.0;
    return cfg;
}

void BM_LyapunovSolve(benchmark::State& state) {
    const auto gain = certify_spd(Matrix::identity(4).scaled(5.0));
    const auto weight = certify_spd(Matrix::identity(4));
    for (auto _ : state) {
        Matrix p = solve_lyapunov(gain, weight);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_LyapunovSolve);

void BM_UnicyclePseudoInverse(benchmark::State& state) {
    const NominalModel model = unicycle_model(UnicycleParams{});
    const Vector x{0.3, -0.2, 0.7};
    for (auto _ : state) {
        Matrix pinv = model.pseudo_inverse(x);
        benchmark::DoNotOptimize(pinv);
    }
}
BENCHMARK(BM_UnicyclePseudoInverse);

void BM_FilterQp(benchmark::State& state) {
    const UnicycleParams params{1.0, 0.1, 1.0, 1.2, 1.0, 1.5, 0.5, 0.5, 2.0};
    const NominalModel model = unicycle_model(params);
    const BarrierSpec spec = unicycle_edge_cbf(params);
    const Vector x{0.4, -0.3, 0.5};
    const Vector delta_hat{0.05, -0.1, 0.2};
    QpSpec qp;
    qp.center = {0.4, 0.2};
    qp.rows.push_back(ue_cbf_constraint(spec, model, x, delta_hat, 0.6));
    for (std::size_t i = 0; i < model.input_set.a.rows(); ++i) {
        AffineConstraintRow row;
        row.coeff = {-model.input_set.a(i, 0), -model.input_set.a(i, 1)};
        row.offset = model.input_set.b[i];
        qp.rows.push_back(row);
    }
    for (auto _ : state) {
        SolveResult res = solve_filter_qp(qp);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_FilterQp);

void BM_FilterSocp(benchmark::State& state) {
    const SyntheticPlant plant = synthetic_socp_plant();
    const Vector x{0.2, 0.3};
    const UeHocbfTerms terms = ue_hocbf_terms(plant.chain, plant.model, x, {0.1, 0.0}, 0.15,
                                              0.35, plant.chain.alpha_high);
    SocpSpec spec;
    spec.qp.center = {0.8};
    AffineConstraintRow lo, hi;
    lo.coeff = {1.0};
    lo.offset = 2.0;
    hi.coeff = {-1.0};
    hi.offset = 2.0;
    spec.qp.rows = {lo, hi};
    spec.cone = terms.cone;
    spec.cone_bound = terms.row;
    for (auto _ : state) {
        SolveResult res = solve_filter_socp(spec);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_FilterSocp);

void BM_ActuatorScenarioSecond(benchmark::State& state) {
    const ScenarioConfig cfg = actuator_cfg();
    for (auto _ : state) {
        SimResult res = run_scenario(cfg);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_ActuatorScenarioSecond)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
