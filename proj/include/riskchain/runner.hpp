#pragma once

#include "riskchain/datagen.hpp"
#include "riskchain/metrics.hpp"
#include "riskchain/pipeline.hpp"

#include <cstdint>
#include <string>

namespace riskchain {

/// Everything a run needs; serialized in full into the manifest so any run
/// reproduces from its manifest alone.
struct RunConfig {
    ScenarioSpec scenario = ScenarioSpec::preset("S1", 10000);
    PipelineConfig pipeline;
    FeatureConfig features;
    NetworkConfig network;
    FusionConfig fusion;
    double classifier_learning_rate = 0.1;
    double classifier_positive_weight = 25.0;
    double fuzzy_learning_rate = 0.05;
    std::string rulebase_file; ///< empty = built-in default base
    double warm_fraction = 0.0;
    std::uint64_t seed = 1; ///< master seed; scenario and network streams derive from it
    bool auto_amount_cap = true; ///< take amount_cap from the generated stream's p99.9
    bool include_monitor_positive = false;
    std::string out_dir = "out";

    void validate() const;
};

std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

struct RunResult {
    MetricsReport metrics;
    std::string manifest_path;
    std::string ledger_path;
    std::string metrics_path;
    std::size_t stream_size = 0;
    std::size_t warm_count = 0;
    std::string dataset_fingerprint;
};

/// Builds the engine from config (rule base file or built-in default).
RiskEngine build_engine(const RunConfig& cfg);

/// Full run: generate -> warm start -> process -> metrics -> write artifacts
/// (manifest.json, ledger.jsonl, incidents.jsonl, lifecycles.csv,
/// events.jsonl, engine_state.json, metrics.json/.csv, series CSVs).
RunResult run_scenario(const RunConfig& cfg);

/// In-memory run without artifact IO; used by tests and the acceptance suite.
struct MemoryRun {
    RunArtifacts artifacts;
    MetricsReport metrics;
    LabeledStream stream;
    std::size_t warm_count = 0;
    RiskEngine final_engine;
};
MemoryRun run_scenario_in_memory(const RunConfig& cfg);

void write_lifecycles_csv(std::span<const TxLifecycle> lifecycles, const std::string& path);
std::vector<TxLifecycle> read_lifecycles_csv(const std::string& path);
void write_events_jsonl(const EventLog& events, const std::string& path);
EventLog read_events_jsonl(const std::string& path);

} // namespace riskchain
