// Serial reference vs OpenMP kernels on the synthetic interaction benchmark.

#include <benchmark/benchmark.h>

#include "elball/eval.hpp"
#include "elball/ingest.hpp"
#include "elball/losses.hpp"
#include "elball/parallel.hpp"
#include "elball/synthetic.hpp"
#include "elball/trainer.hpp"

using namespace elball;

namespace {

struct Workload {
  NormalizedTheory theory;
  LinkSplit split;
  EmbeddingSet embeddings;
  LossBatch batch;

  Workload() {
    SyntheticConfig sc;
    sc.entities = 400;
    const auto data = make_synthetic(sc);
    auto ingested = ingest(data.dataset, IngestOptions{});
    parse_into(ingested.ontology, format_taxonomy(data.taxonomy));
    theory = normalize(eliminate_abox(ingested.ontology));
    split = std::move(ingested.split);
    Rng rng(1);
    embeddings = init_embeddings(theory, 50, rng);
    const auto negatives = generate_negatives(theory.nf3, negative_candidates(theory), 4, rng);
    batch = full_batch(theory, negatives.tuples, -0.1);
  }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

Execution mode(std::int64_t i) {
  return i == 0 ? Execution::kSerial : i == 1 ? Execution::kParallel : Execution::kDeterministic;
}

void BM_BatchGradient(benchmark::State& state) {
  const auto& w = workload();
  const auto exec = mode(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(batch_gradient(w.batch, w.embeddings, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.batch.size()));
  state.SetLabel(state.range(0) == 0 ? "serial" : state.range(0) == 1 ? "parallel" : "deterministic");
}

void BM_RankingReport(benchmark::State& state) {
  const auto& w = workload();
  const auto exec = mode(state.range(0));
  const auto scorer = embedding_scorer(w.embeddings, w.split, "interacts", -0.1);
  for (auto _ : state) benchmark::DoNotOptimize(ranking_report(w.split, "interacts", scorer, exec));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RankingReport)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
