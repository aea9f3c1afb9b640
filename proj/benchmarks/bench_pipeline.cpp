// Throughput of the hot stages: CSV ingest, classification, ledger math.

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "footprint/classify.hpp"
#include "footprint/ingest.hpp"
#include "footprint/ledger.hpp"

using namespace footprint;

namespace {

std::string make_csv(int rows) {
    std::mt19937 rng(42);
    const std::vector<std::string> pool = {
        "/imagine a fox in watercolor",
        "/imagine image #2 keep",
        "/imagine variation with more fog",
        "what should I try next",
    };
    std::ostringstream csv;
    csv << "author,timestamp,content\n";
    for (int i = 0; i < rows; ++i)
        csv << "user" << (rng() % 30) << ",2024-03-01T1" << (rng() % 10) << ":00:00Z,"
            << pool[rng() % pool.size()] << "\n";
    return csv.str();
}

std::vector<RawEvent> make_raw(int rows) {
    std::istringstream in(make_csv(rows));
    return parse_discord_csv(in, CsvOptions{}).events;
}

void BM_ParseDiscordCsv(benchmark::State& state) {
    std::string csv = make_csv(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        std::istringstream in(csv);
        benchmark::DoNotOptimize(parse_discord_csv(in, CsvOptions{}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseDiscordCsv)->Arg(1000)->Arg(10000);

void BM_Classify(benchmark::State& state) {
    std::vector<RawEvent> raw = make_raw(static_cast<int>(state.range(0)));
    RuleSet rules = RuleSet::midjourney_defaults();
    ActorMap actors;
    for (auto _ : state) benchmark::DoNotOptimize(classify_all(raw, rules, actors));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Classify)->Arg(1000)->Arg(10000);

void BM_Ledger(benchmark::State& state) {
    std::vector<RawEvent> raw = make_raw(static_cast<int>(state.range(0)));
    std::vector<GenerationEvent> events =
        classify_all(raw, RuleSet::midjourney_defaults(), ActorMap{}).events;
    EnergyFactorTable factors = EnergyFactorTable::defaults();
    for (auto _ : state) benchmark::DoNotOptimize(energy_of(events, factors));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ledger)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
