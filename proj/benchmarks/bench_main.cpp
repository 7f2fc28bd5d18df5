#include "ctfsyn/circuit/cell.hpp"
#include "ctfsyn/device/trap.hpp"
#include "ctfsyn/plasticity/fit.hpp"
#include "ctfsyn/snn/network.hpp"
#include "ctfsyn/waveform/stdp.hpp"

#include <benchmark/benchmark.h>

using namespace ctfsyn;

static void BM_ApplyPulse(benchmark::State& state)
{
    const auto dev = device::default_device();
    const auto s = dev.state_at(-0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(dev.apply_pulse(s, 12.5, 1e-3));
}
BENCHMARK(BM_ApplyPulse);

static void BM_TraverseWindow(benchmark::State& state)
{
    const auto dev = device::default_device();
    const double t_p = static_cast<double>(state.range(0)) * 1e-4;
    for (auto _ : state)
        benchmark::DoNotOptimize(dev.traverse(12.5, t_p, 400000));
}
BENCHMARK(BM_TraverseWindow)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_StdpPoint(benchmark::State& state)
{
    const auto dev = device::default_device();
    const waveform::StdpSetup setup{};
    for (auto _ : state)
        benchmark::DoNotOptimize(waveform::stdp_point(dev, setup, 3e-3));
}
BENCHMARK(BM_StdpPoint)->Unit(benchmark::kMicrosecond);

static void BM_IvSweep(benchmark::State& state)
{
    const circuit::CellModels m{};
    const circuit::CellTopology cell{true, circuit::Substrate::soi};
    for (auto _ : state)
        benchmark::DoNotOptimize(circuit::iv_sweep(cell, m, -8.0, 8.0, 0.01, 0.0));
}
BENCHMARK(BM_IvSweep)->Unit(benchmark::kMillisecond);

static void BM_PlasticityFit(benchmark::State& state)
{
    const std::vector<double> g{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> dt{-2.0, -0.5, -0.1, 0.0, 0.1, 0.5, 2.0};
    const auto samples = plasticity::generate_samples(plasticity::PlasticityParams{}, g, dt);
    plasticity::FitOptions o;
    o.starts = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(plasticity::fit(samples, o));
}
BENCHMARK(BM_PlasticityFit)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_TrainSeed(benchmark::State& state)
{
    const auto data = snn::load_iris(CTFSYN_BENCH_DATA_DIR "/iris.csv");
    snn::RunSpec spec;
    spec.epochs = 5;
    for (auto _ : state)
        benchmark::DoNotOptimize(snn::train_seed(data, spec, 1));
}
BENCHMARK(BM_TrainSeed)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
