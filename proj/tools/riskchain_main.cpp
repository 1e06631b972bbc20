#include "riskchain/errors.hpp"
#include "riskchain/metrics.hpp"
#include "riskchain/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using namespace riskchain;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerifyFailed = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunFlags {
    std::string config_file;
    std::string from_manifest;
    std::string scenario = "S1";
    std::size_t n_tx = 10000;
    double fraud_rate = -1.0;
    std::uint64_t seed = 1;
    std::size_t nodes = 5;
    std::size_t theta = 3;
    double lambda = 0.6;
    double eta1 = 0.3;
    double eta2 = 0.7;
    std::size_t block_size = 50;
    std::int64_t block_interval = 5000;
    double warm = 0.0;
    std::string rules_file;
    std::string out_dir = "out";
    std::string format = "text";
    bool no_online_learning = false;
    bool monitor_positive = false;
};

RunConfig assemble_run_config(const CLI::App* cmd, const RunFlags& f) {
    RunConfig cfg;
    if (!f.from_manifest.empty()) {
        json manifest = json::parse(read_file(f.from_manifest));
        cfg = run_config_from_json(manifest.at("config").dump());
    } else if (!f.config_file.empty()) {
        cfg = run_config_from_json(read_file(f.config_file));
    }

    bool fresh = f.from_manifest.empty() && f.config_file.empty();
    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };

    if (fresh || passed("--scenario") || passed("--n-tx")) {
        std::size_t n = (passed("--n-tx") || fresh) ? f.n_tx : cfg.scenario.n_tx;
        std::string name = (passed("--scenario") || fresh) ? f.scenario : cfg.scenario.name;
        std::uint64_t seed = (passed("--seed") || fresh) ? f.seed : cfg.seed;
        cfg.scenario = ScenarioSpec::preset(name, n, seed);
        cfg.seed = seed;
    }
    if (passed("--fraud-rate")) cfg.scenario.fraud_rate = f.fraud_rate;
    if (passed("--seed")) {
        cfg.seed = f.seed;
        cfg.scenario.seed = f.seed;
    }
    if (passed("--nodes")) cfg.network.n_nodes = f.nodes;
    if (passed("--theta")) cfg.network.theta = f.theta;
    if (passed("--lambda")) cfg.fusion.lambda = f.lambda;
    if (passed("--eta1")) cfg.fusion.eta1 = f.eta1;
    if (passed("--eta2")) cfg.fusion.eta2 = f.eta2;
    if (passed("--block-size")) cfg.pipeline.block_size = f.block_size;
    if (passed("--block-interval")) cfg.pipeline.block_interval_ms = f.block_interval;
    if (passed("--warm-start")) cfg.warm_fraction = f.warm;
    if (passed("--rules")) cfg.rulebase_file = f.rules_file;
    if (f.no_online_learning) cfg.pipeline.online_learning = false;
    if (f.monitor_positive) cfg.include_monitor_positive = true;
    if (passed("--out") || fresh) cfg.out_dir = f.out_dir;
    return cfg;
}

int cmd_run(const CLI::App* cmd, const RunFlags& f) {
    RunConfig cfg = assemble_run_config(cmd, f);
    RunResult result = run_scenario(cfg);
    const MetricsReport& m = result.metrics;

    auto opt = [](const std::optional<double>& v) {
        return v ? std::to_string(*v) : std::string("n/a");
    };
    std::cout << "scenario " << m.scenario << " seed " << m.seed << "  ("
              << result.stream_size << " tx, " << result.warm_count << " warm-up)\n"
              << "  accuracy   " << opt(m.accuracy) << "\n"
              << "  precision  " << opt(m.precision) << "\n"
              << "  mean T_c   " << m.tc.mean << " ms  (median " << m.tc.median
              << ", p95 " << m.tc.p95 << ")\n"
              << "  mean D_b   " << m.db.mean << " ms  (max " << m.db.max << ")\n"
              << "  mean L_tot " << m.latency.total_mean << " ms  (edge "
              << m.latency.edge_mean << " + ai " << m.latency.ai_mean
              << " + blockchain " << m.latency.blockchain_mean << ")\n"
              << "  decisions  accept " << m.n_accept << " / monitor " << m.n_monitor
              << " / reject " << m.n_reject << "  blocks " << m.n_blocks << "\n"
              << "  artifacts  " << cfg.out_dir << "\n";
    if (f.format == "json") {
        std::cout << metrics_to_json(m) << "\n";
    } else if (f.format == "csv") {
        std::cout << metrics_csv_header() << "\n" << metrics_csv_row(m) << "\n";
    }
    return kExitOk;
}

int cmd_gen(const std::string& scenario, std::size_t n_tx, double fraud_rate,
            std::uint64_t seed, const std::string& out_path) {
    ScenarioSpec spec = ScenarioSpec::preset(scenario, n_tx, seed);
    if (fraud_rate >= 0.0) spec.fraud_rate = fraud_rate;
    LabeledStream stream = generate(spec);
    write_csv_file(stream, out_path);

    json manifest{{"schema_version", 1},
                  {"kind", "dataset"},
                  {"generator_version", stream.generator_version},
                  {"scenario", spec.name},
                  {"n_tx", stream.txs.size()},
                  {"fraud_rate", spec.fraud_rate},
                  {"fraud_count", stream.fraud_count},
                  {"seed", spec.seed},
                  {"suggested_amount_cap", stream.suggested_amount_cap},
                  {"fingerprint", stream_fingerprint(stream)}};
    std::ofstream mout(out_path + ".manifest.json", std::ios::binary);
    mout << manifest.dump(2) << '\n';

    std::cout << "wrote " << stream.txs.size() << " transactions (" << stream.fraud_count
              << " fraudulent) to " << out_path << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& path) {
    LoadedLedger loaded = import_ledger_file(path);
    VerifyResult result = verify_chain(loaded.blocks, loaded.validators);
    if (result.ok) {
        std::cout << "ok: " << loaded.blocks.size() << " blocks verified\n";
        return kExitOk;
    }
    std::cout << "INVALID at block " << result.first_invalid << ": " << result.reason
              << "\n";
    return kExitVerifyFailed;
}

// XOR-based field mutations; applying the same tamper twice restores the
// original values.
int cmd_tamper(const std::string& path, std::uint64_t block_index,
               const std::string& field, std::string out_path) {
    if (out_path.empty()) out_path = path + ".tampered";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + out_path + "' for writing");

    auto flip_hex = [](json& j, const char* key) {
        auto bytes = from_hex(j.at(key).get<std::string>());
        if (bytes.empty()) throw DomainError("empty hex field");
        bytes[0] ^= 0x01;
        j[key] = to_hex(bytes);
    };

    std::string line;
    bool found = false;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            out << line << '\n';
            header = false;
            continue;
        }
        json j = json::parse(line);
        if (j.at("index").get<std::uint64_t>() != block_index) {
            out << line << '\n';
            continue;
        }
        found = true;
        if (field == "amount") {
            if (j.at("entries").empty()) {
                throw DomainError("block " + std::to_string(block_index) +
                                  " has no entries to tamper");
            }
            double a = j["entries"][0].at("amount").get<double>();
            j["entries"][0]["amount"] =
                std::bit_cast<double>(std::bit_cast<std::uint64_t>(a) ^ 1ULL);
        } else if (field == "created_at") {
            j["created_at"] = j.at("created_at").get<std::int64_t>() ^ 1;
        } else if (field == "prev_hash") {
            flip_hex(j, "prev_hash");
        } else if (field == "hash") {
            flip_hex(j, "hash");
        } else if (field == "signature") {
            if (j.at("signatures").empty()) {
                throw DomainError("block " + std::to_string(block_index) +
                                  " carries no signatures");
            }
            flip_hex(j["signatures"][0], "signature");
        } else {
            throw ConfigError("unknown tamper field '" + field + "'");
        }
        out << j.dump() << '\n';
    }
    if (!found) {
        throw ConfigError("block index " + std::to_string(block_index) +
                          " not present in " + path);
    }
    std::cout << "wrote tampered copy to " << out_path << "\n";
    return kExitOk;
}

int cmd_metrics(const std::string& dir, const std::string& format) {
    fs::path base(dir);
    auto lifecycles = read_lifecycles_csv((base / "lifecycles.csv").string());
    EventLog events = read_events_jsonl((base / "events.jsonl").string());
    json manifest = json::parse(read_file((base / "manifest.json").string()));
    RunConfig cfg = run_config_from_json(manifest.at("config").dump());

    // Rebuild per-block propagation results from the event log.
    std::map<std::uint64_t, BroadcastResult> by_block;
    for (const NetEvent& e : events) {
        if (e.type == "broadcast") {
            by_block[e.block_index].broadcast_at = e.t;
        } else if (e.type == "receive") {
            by_block[e.block_index].receive_times.emplace_back(e.node, e.t);
        }
    }
    std::vector<BroadcastResult> broadcasts;
    for (auto& [index, b] : by_block) {
        std::int64_t latest = b.broadcast_at;
        for (const auto& [node, t] : b.receive_times) latest = std::max(latest, t);
        b.propagation_delay = latest - b.broadcast_at;
        broadcasts.push_back(b);
    }

    MetricsReport report;
    report.scenario = cfg.scenario.name;
    report.seed = cfg.seed;
    report.n_evaluated = lifecycles.size();
    for (const TxLifecycle& lc : lifecycles) {
        switch (lc.decision) {
        case Decision::Accept: report.n_accept += 1; break;
        case Decision::Monitor: report.n_monitor += 1; break;
        case Decision::Reject: report.n_reject += 1; break;
        }
        if (lc.terminal_failed) report.n_failed += 1;
    }
    report.cm = confusion(lifecycles, PositiveRule{cfg.include_monitor_positive});
    auto surface = [&](const char* name, double (*fn)(const ConfusionMatrix&),
                       std::optional<double>& slot) {
        try {
            slot = fn(report.cm);
        } catch (const DomainError&) {
            report.undefined_metrics.emplace_back(name);
        }
    };
    surface("accuracy", accuracy, report.accuracy);
    surface("precision", precision, report.precision);
    surface("recall", recall, report.recall);
    surface("f1", f1, report.f1);
    timing_metrics(lifecycles, broadcasts, cfg.pipeline.edge_cost_ms,
                   cfg.pipeline.ai_cost_ms, report);

    if (format == "csv") {
        std::cout << metrics_csv_header() << "\n" << metrics_csv_row(report) << "\n";
    } else {
        std::cout << metrics_to_json(report) << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seeded fraud-detection and permissioned-ledger simulator"};
    app.require_subcommand(1);

    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "Generate a scenario, process it, emit artifacts");
    run->add_option("--config", rf.config_file, "JSON config file (flags override it)");
    run->add_option("--from-manifest", rf.from_manifest, "Reproduce a run from its manifest");
    run->add_option("--scenario", rf.scenario, "S1 | S2 | S3");
    run->add_option("--n-tx", rf.n_tx, "Stream length");
    run->add_option("--fraud-rate", rf.fraud_rate, "Override the preset fraud rate");
    run->add_option("--seed", rf.seed, "Master seed");
    run->add_option("--nodes", rf.nodes, "Validator committee size");
    run->add_option("--theta", rf.theta, "Approvals required to commit");
    run->add_option("--lambda", rf.lambda, "Statistical vs fuzzy fusion weight");
    run->add_option("--eta1", rf.eta1, "Accept/monitor threshold");
    run->add_option("--eta2", rf.eta2, "Monitor/reject threshold");
    run->add_option("--block-size", rf.block_size, "Transactions per block");
    run->add_option("--block-interval", rf.block_interval, "Proposal deadline (virtual ms)");
    run->add_option("--warm-start", rf.warm, "Leading stream fraction used for training");
    run->add_option("--rules", rf.rules_file, "Rule base JSON file");
    run->add_option("--out", rf.out_dir, "Artifacts directory");
    run->add_option("--format", rf.format, "Extra stdout format: text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    run->add_flag("--no-online-learning", rf.no_online_learning,
                  "Freeze the engine during the run");
    run->add_flag("--monitor-positive", rf.monitor_positive,
                  "Count monitored transactions as fraud predictions");

    std::string gen_scenario = "S1", gen_out = "dataset.csv";
    std::size_t gen_n = 50000;
    double gen_fraud = -1.0;
    std::uint64_t gen_seed = 1;
    CLI::App* gen = app.add_subcommand("gen", "Generate a labeled CSV dataset");
    gen->add_option("--scenario", gen_scenario, "S1 | S2 | S3");
    gen->add_option("--n-tx", gen_n, "Transactions to generate");
    gen->add_option("--fraud-rate", gen_fraud, "Override the preset fraud rate");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output CSV path");

    std::string verify_path;
    CLI::App* verify = app.add_subcommand("verify", "Recheck an exported ledger end to end");
    verify->add_option("ledger", verify_path, "ledger.jsonl path")->required();

    std::string tamper_path, tamper_field = "amount", tamper_out;
    std::uint64_t tamper_block = 0;
    CLI::App* tamper = app.add_subcommand("tamper", "Write a single-field-mutated ledger copy");
    tamper->add_option("ledger", tamper_path, "ledger.jsonl path")->required();
    tamper->add_option("--block", tamper_block, "Block index to mutate")->required();
    tamper->add_option("--field", tamper_field,
                       "amount | created_at | prev_hash | hash | signature");
    tamper->add_option("--out", tamper_out, "Mutated copy path (default: <ledger>.tampered)");

    std::string metrics_dir, metrics_format = "json";
    CLI::App* metrics = app.add_subcommand("metrics", "Recompute metrics from run artifacts");
    metrics->add_option("artifacts", metrics_dir, "Run artifacts directory")->required();
    metrics->add_option("--format", metrics_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run, rf);
        if (gen->parsed()) return cmd_gen(gen_scenario, gen_n, gen_fraud, gen_seed, gen_out);
        if (verify->parsed()) return cmd_verify(verify_path);
        if (tamper->parsed())
            return cmd_tamper(tamper_path, tamper_block, tamper_field, tamper_out);
        if (metrics->parsed()) return cmd_metrics(metrics_dir, metrics_format);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
