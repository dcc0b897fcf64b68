// Serial reference kernels against their OpenMP versions on fixture data.
#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "wiser/convert.h"
#include "wiser/corpus.h"
#include "wiser/metrics.h"
#include "wiser/roles.h"

namespace {

std::string fixture(const std::string& name) {
  return std::string(WISER_DATA_DIR) + "/fixtures/" + name;
}

struct Inputs {
  wiser::Catalog catalog;
  wiser::OverrideTable overrides;
  wiser::CatalogMapping mapping;
  std::vector<wiser::Document> corpus;
  std::vector<wiser::Document> shuffled;

  Inputs()
      : catalog(wiser::load_catalog(fixture("catalog.tsv"))),
        overrides(wiser::builtin_overrides()) {
    overrides.merge(wiser::load_overrides(fixture("overrides.tsv")));
    mapping = wiser::map_catalog_serial(catalog, wiser::builtin_rules(), overrides);
    auto base = wiser::read_corpus(fixture("corpus50.txt")).documents;
    auto appendix = wiser::read_corpus(fixture("appendix.txt")).documents;
    // Repeat the fixtures so each kernel has enough independent work.
    for (int copy = 0; copy < 8; ++copy) {
      for (const auto* part : {&base, &appendix}) {
        for (auto d : *part) {
          d.id += "#" + std::to_string(copy);
          corpus.push_back(std::move(d));
        }
      }
    }
    // Predictions: each graph with its concepts rotated one place.
    shuffled = corpus;
    for (auto& d : shuffled) {
      auto& inst = d.graph.instances;
      if (inst.size() < 2) continue;
      std::string first = inst.front().concept_label;
      for (size_t i = 0; i + 1 < inst.size(); ++i) inst[i].concept_label = inst[i + 1].concept_label;
      inst.back().concept_label = first;
    }
  }

  wiser::ConversionConfig config() const {
    wiser::ConversionConfig c;
    c.catalog = &catalog;
    c.mapping = &mapping.table;
    c.overrides = &overrides;
    return c;
  }
};

const Inputs& inputs() {
  static const Inputs in;
  return in;
}

void BM_MapCatalogSerial(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wiser::map_catalog_serial(in.catalog, wiser::builtin_rules(), in.overrides));
  }
}

void BM_MapCatalogParallel(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wiser::map_catalog(in.catalog, wiser::builtin_rules(), in.overrides,
                                                static_cast<int>(state.range(0))));
  }
}

void BM_ConvertSerial(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(wiser::convert_corpus_serial(in.corpus, in.config()));
  state.SetItemsProcessed(state.iterations() * in.corpus.size());
}

void BM_ConvertParallel(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wiser::convert_corpus(in.corpus, in.config(), static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * in.corpus.size());
}

void BM_ScoreSerial(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wiser::score_corpus_serial(in.shuffled, in.corpus, wiser::default_metrics()));
  }
  state.SetItemsProcessed(state.iterations() * in.corpus.size());
}

void BM_ScoreParallel(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wiser::score_corpus(in.shuffled, in.corpus, wiser::default_metrics(), {},
                                                 static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * in.corpus.size());
}

}  // namespace

BENCHMARK(BM_MapCatalogSerial);
BENCHMARK(BM_MapCatalogParallel)->Arg(1)->Arg(2)->Arg(4);
BENCHMARK(BM_ConvertSerial);
BENCHMARK(BM_ConvertParallel)->Arg(1)->Arg(2)->Arg(4);
BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
