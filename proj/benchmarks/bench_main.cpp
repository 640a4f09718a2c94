#include <benchmark/benchmark.h>

#include "osid/evt.hpp"
#include "osid/experiment.hpp"
#include "osid/protocol.hpp"
#include "osid/rng.hpp"
#include "osid/scoring.hpp"
#include "osid/synthetic.hpp"

namespace {

osid::Dataset bench_dataset(int known, std::size_t dim) {
    osid::SyntheticSpec spec;
    spec.dimension = dim;
    spec.known = known;
    spec.known_unknown = known;
    spec.unknown_unknown = 2 * known;
    spec.images_per_known = 5;
    spec.seed = 4711;
    return osid::generate_synthetic(spec);
}

void BM_CosineSimilarity(benchmark::State& state) {
    osid::SeededRng rng(1);
    const auto a = rng.next_unit_vector(static_cast<std::size_t>(state.range(0)));
    const auto b = rng.next_unit_vector(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(osid::cosine_similarity(a, b));
    }
}
BENCHMARK(BM_CosineSimilarity)->Arg(64)->Arg(512)->Arg(4096);

void BM_WeibullFit(benchmark::State& state) {
    osid::SeededRng rng(2);
    std::vector<double> tail(static_cast<std::size_t>(state.range(0)));
    for (double& x : tail) {
        x = 0.7 * (0.4 + 0.4 * rng.next_uniform());
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(osid::fit_weibull_mle(tail));
    }
}
BENCHMARK(BM_WeibullFit)->Arg(100)->Arg(500)->Arg(5000);

void BM_ScoreAllCosine(benchmark::State& state) {
    const auto dataset = bench_dataset(static_cast<int>(state.range(0)), 128);
    const auto partition = osid::build_partition(dataset);
    const auto gallery = osid::make_gallery_templates(dataset, partition);
    const auto probes =
        osid::subset(dataset, osid::probe_set(partition, osid::ProbeSetId::O3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(osid::score_all(
            {osid::Method::Cosine, osid::Fusion::Max, nullptr, nullptr}, gallery,
            probes));
    }
}
BENCHMARK(BM_ScoreAllCosine)->Arg(10)->Arg(50);

void BM_EvmTrain(benchmark::State& state) {
    const auto dataset = bench_dataset(static_cast<int>(state.range(0)), 128);
    const auto partition = osid::build_partition(dataset);
    const auto gallery = osid::make_gallery_templates(dataset, partition);
    const auto training = osid::training_subset(dataset, partition);
    osid::EvmConfig cfg;
    cfg.tail_size = 50;
    for (auto _ : state) {
        benchmark::DoNotOptimize(osid::train_evm(gallery, training, cfg));
    }
}
BENCHMARK(BM_EvmTrain)->Arg(10)->Arg(50);

void BM_EndToEndGridCell(benchmark::State& state) {
    const auto dataset = bench_dataset(20, 64);
    osid::RunConfig cfg;
    cfg.method = osid::Method::Evm;
    cfg.probe_set = osid::ProbeSetId::O3;
    cfg.tail_size = 32;
    for (auto _ : state) {
        benchmark::DoNotOptimize(osid::run_experiment(dataset, cfg));
    }
}
BENCHMARK(BM_EndToEndGridCell);

}  // namespace

BENCHMARK_MAIN();
