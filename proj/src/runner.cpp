#include "riskchain/runner.hpp"

#include "riskchain/errors.hpp"
#include "riskchain/rng.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace riskchain {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {
constexpr const char* kToolVersion = "riskchain-0.1.0";
constexpr int kManifestSchemaVersion = 1;
} // namespace

void RunConfig::validate() const {
    scenario.validate();
    pipeline.validate();
    network.validate();
    fusion.validate();
    if (warm_fraction < 0.0 || warm_fraction >= 1.0) {
        throw ConfigError("warm_fraction must lie in [0,1)");
    }
    if (classifier_learning_rate <= 0.0 || fuzzy_learning_rate <= 0.0) {
        throw ConfigError("learning rates must be positive");
    }
}

namespace {

json pattern_mix_to_json(const PatternMix& m) {
    return {{"value_outlier", m.value_outlier},
            {"micro_burst", m.micro_burst},
            {"off_hours", m.off_hours},
            {"geo_jump", m.geo_jump},
            {"multi_step_chain", m.multi_step_chain}};
}

PatternMix pattern_mix_from_json(const json& j) {
    PatternMix m;
    m.value_outlier = j.at("value_outlier").get<double>();
    m.micro_burst = j.at("micro_burst").get<double>();
    m.off_hours = j.at("off_hours").get<double>();
    m.geo_jump = j.at("geo_jump").get<double>();
    m.multi_step_chain = j.at("multi_step_chain").get<double>();
    return m;
}

json gen_params_to_json(const GenParams& p) {
    return {{"user_mean_mu", p.user_mean_mu},
            {"user_mean_sigma", p.user_mean_sigma},
            {"tx_sigma", p.tx_sigma},
            {"day_length_ms", p.day_length_ms},
            {"night_start", p.night_start},
            {"night_end", p.night_end},
            {"night_intensity", p.night_intensity},
            {"start_hour", p.start_hour},
            {"alt_device_prob", p.alt_device_prob},
            {"dormant_user_frac", p.dormant_user_frac},
            {"dormant_pick_weight", p.dormant_pick_weight},
            {"seeds_per_dormant", p.seeds_per_dormant},
            {"outlier_multiplier", p.outlier_multiplier},
            {"off_hours_multiplier", p.off_hours_multiplier},
            {"chain_multiplier", p.chain_multiplier},
            {"burst_amount_frac", p.burst_amount_frac},
            {"burst_length", p.burst_length},
            {"chain_min_hops", p.chain_min_hops},
            {"chain_max_hops", p.chain_max_hops}};
}

GenParams gen_params_from_json(const json& j) {
    GenParams p;
    p.user_mean_mu = j.at("user_mean_mu").get<double>();
    p.user_mean_sigma = j.at("user_mean_sigma").get<double>();
    p.tx_sigma = j.at("tx_sigma").get<double>();
    p.day_length_ms = j.at("day_length_ms").get<std::int64_t>();
    p.night_start = j.at("night_start").get<double>();
    p.night_end = j.at("night_end").get<double>();
    p.night_intensity = j.at("night_intensity").get<double>();
    p.start_hour = j.at("start_hour").get<double>();
    p.alt_device_prob = j.at("alt_device_prob").get<double>();
    p.dormant_user_frac = j.at("dormant_user_frac").get<double>();
    p.dormant_pick_weight = j.at("dormant_pick_weight").get<double>();
    p.seeds_per_dormant = j.at("seeds_per_dormant").get<int>();
    p.outlier_multiplier = j.at("outlier_multiplier").get<double>();
    p.off_hours_multiplier = j.at("off_hours_multiplier").get<double>();
    p.chain_multiplier = j.at("chain_multiplier").get<double>();
    p.burst_amount_frac = j.at("burst_amount_frac").get<double>();
    p.burst_length = j.at("burst_length").get<int>();
    p.chain_min_hops = j.at("chain_min_hops").get<int>();
    p.chain_max_hops = j.at("chain_max_hops").get<int>();
    return p;
}

json scenario_to_json(const ScenarioSpec& s) {
    return {{"name", s.name},
            {"n_tx", s.n_tx},
            {"fraud_rate", s.fraud_rate},
            {"n_users", s.n_users},
            {"arrival_mean_ms", s.arrival_mean_ms},
            {"pattern_mix", pattern_mix_to_json(s.pattern_mix)},
            {"seed", s.seed},
            {"params", gen_params_to_json(s.params)}};
}

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec s;
    s.name = j.at("name").get<std::string>();
    s.n_tx = j.at("n_tx").get<std::size_t>();
    s.fraud_rate = j.at("fraud_rate").get<double>();
    s.n_users = j.at("n_users").get<std::size_t>();
    s.arrival_mean_ms = j.at("arrival_mean_ms").get<double>();
    s.pattern_mix = pattern_mix_from_json(j.at("pattern_mix"));
    s.seed = j.at("seed").get<std::uint64_t>();
    s.params = gen_params_from_json(j.at("params"));
    return s;
}

} // namespace

std::string run_config_to_json(const RunConfig& cfg) {
    json j{{"scenario", scenario_to_json(cfg.scenario)},
           {"pipeline",
            {{"block_size", cfg.pipeline.block_size},
             {"block_interval_ms", cfg.pipeline.block_interval_ms},
             {"max_block_retries", cfg.pipeline.max_block_retries},
             {"edge_cost_ms", cfg.pipeline.edge_cost_ms},
             {"ai_cost_ms", cfg.pipeline.ai_cost_ms},
             {"online_learning", cfg.pipeline.online_learning},
             {"warm_epochs", cfg.pipeline.warm_epochs},
             {"allow_unbounded_block_size", cfg.pipeline.allow_unbounded_block_size}}},
           {"features",
            {{"amount_cap", cfg.features.amount_cap},
             {"day_length_ms", cfg.features.day_length_ms},
             {"window_ms", cfg.features.window_ms},
             {"rate_mid", cfg.features.rate_mid},
             {"rate_scale", cfg.features.rate_scale},
             {"zscore_scale", cfg.features.zscore_scale},
             {"dormancy_mid_h", cfg.features.dormancy_mid_h},
             {"dormancy_scale_h", cfg.features.dormancy_scale_h},
             {"geo_speed_limit_kmh", cfg.features.geo_speed_limit_kmh}}},
           {"network",
            {{"n_nodes", cfg.network.n_nodes},
             {"theta", cfg.network.theta},
             {"link_min_ms", cfg.network.link_min_ms},
             {"link_max_ms", cfg.network.link_max_ms},
             {"validation_min_ms", cfg.network.validation_min_ms},
             {"validation_max_ms", cfg.network.validation_max_ms}}},
           {"fusion",
            {{"lambda", cfg.fusion.lambda},
             {"eta1", cfg.fusion.eta1},
             {"eta2", cfg.fusion.eta2}}},
           {"classifier_learning_rate", cfg.classifier_learning_rate},
           {"classifier_positive_weight", cfg.classifier_positive_weight},
           {"fuzzy_learning_rate", cfg.fuzzy_learning_rate},
           {"rulebase_file", cfg.rulebase_file},
           {"warm_fraction", cfg.warm_fraction},
           {"seed", cfg.seed},
           {"auto_amount_cap", cfg.auto_amount_cap},
           {"include_monitor_positive", cfg.include_monitor_positive},
           {"out_dir", cfg.out_dir}};
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    cfg.scenario = scenario_from_json(j.at("scenario"));
    const json& p = j.at("pipeline");
    cfg.pipeline.block_size = p.at("block_size").get<std::size_t>();
    cfg.pipeline.block_interval_ms = p.at("block_interval_ms").get<std::int64_t>();
    cfg.pipeline.max_block_retries = p.at("max_block_retries").get<std::size_t>();
    cfg.pipeline.edge_cost_ms = p.at("edge_cost_ms").get<std::int64_t>();
    cfg.pipeline.ai_cost_ms = p.at("ai_cost_ms").get<std::int64_t>();
    cfg.pipeline.online_learning = p.at("online_learning").get<bool>();
    cfg.pipeline.warm_epochs = p.at("warm_epochs").get<int>();
    cfg.pipeline.allow_unbounded_block_size =
        p.at("allow_unbounded_block_size").get<bool>();
    const json& f = j.at("features");
    cfg.features.amount_cap = f.at("amount_cap").get<double>();
    cfg.features.day_length_ms = f.at("day_length_ms").get<std::int64_t>();
    cfg.features.window_ms = f.at("window_ms").get<std::int64_t>();
    cfg.features.rate_mid = f.at("rate_mid").get<double>();
    cfg.features.rate_scale = f.at("rate_scale").get<double>();
    cfg.features.zscore_scale = f.at("zscore_scale").get<double>();
    cfg.features.dormancy_mid_h = f.at("dormancy_mid_h").get<double>();
    cfg.features.dormancy_scale_h = f.at("dormancy_scale_h").get<double>();
    cfg.features.geo_speed_limit_kmh = f.at("geo_speed_limit_kmh").get<double>();
    const json& n = j.at("network");
    cfg.network.n_nodes = n.at("n_nodes").get<std::size_t>();
    cfg.network.theta = n.at("theta").get<std::size_t>();
    cfg.network.link_min_ms = n.at("link_min_ms").get<std::int64_t>();
    cfg.network.link_max_ms = n.at("link_max_ms").get<std::int64_t>();
    cfg.network.validation_min_ms = n.at("validation_min_ms").get<std::int64_t>();
    cfg.network.validation_max_ms = n.at("validation_max_ms").get<std::int64_t>();
    const json& fu = j.at("fusion");
    cfg.fusion.lambda = fu.at("lambda").get<double>();
    cfg.fusion.eta1 = fu.at("eta1").get<double>();
    cfg.fusion.eta2 = fu.at("eta2").get<double>();
    cfg.classifier_learning_rate = j.at("classifier_learning_rate").get<double>();
    cfg.classifier_positive_weight = j.at("classifier_positive_weight").get<double>();
    cfg.fuzzy_learning_rate = j.at("fuzzy_learning_rate").get<double>();
    cfg.rulebase_file = j.at("rulebase_file").get<std::string>();
    cfg.warm_fraction = j.at("warm_fraction").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.auto_amount_cap = j.at("auto_amount_cap").get<bool>();
    cfg.include_monitor_positive = j.at("include_monitor_positive").get<bool>();
    cfg.out_dir = j.at("out_dir").get<std::string>();
    return cfg;
}

RiskEngine build_engine(const RunConfig& cfg) {
    FuzzyRuleBase rules = default_rule_base();
    if (!cfg.rulebase_file.empty()) {
        std::ifstream in(cfg.rulebase_file);
        if (!in) throw IoError("cannot open rule base file '" + cfg.rulebase_file + "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        rules = rulebase_from_json(text);
    }
    rules.set_learning_rate(cfg.fuzzy_learning_rate);
    LogisticClassifier clf(kFeatureDim, cfg.classifier_learning_rate,
                           cfg.classifier_positive_weight);
    return RiskEngine(std::move(clf), std::move(rules), cfg.fusion);
}

MemoryRun run_scenario_in_memory(const RunConfig& cfg) {
    cfg.validate();

    ScenarioSpec spec = cfg.scenario;
    spec.seed = cfg.seed;
    spec.params.day_length_ms = cfg.features.day_length_ms;
    MemoryRun run;
    run.stream = generate(spec);

    FeatureConfig fcfg = cfg.features;
    if (cfg.auto_amount_cap) fcfg.amount_cap = run.stream.suggested_amount_cap;

    NetworkModel network(cfg.network, mix_seed(cfg.seed, 3));
    run.warm_count = static_cast<std::size_t>(
        cfg.warm_fraction * static_cast<double>(run.stream.txs.size()));
    run.final_engine = build_engine(cfg);
    run.artifacts = process_stream(run.stream, cfg.pipeline, fcfg, build_engine(cfg),
                                   std::move(network), cfg.warm_fraction,
                                   &run.final_engine);
    run.metrics = compute_metrics(run.artifacts, cfg.pipeline,
                                  PositiveRule{cfg.include_monitor_positive});
    run.metrics.scenario = spec.name;
    run.metrics.seed = cfg.seed;
    return run;
}

void write_lifecycles_csv(std::span<const TxLifecycle> lifecycles,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "tx_id,t_submitted,t_assessed,t_confirmed,decision,r_ml,r_f,r,label,failed\n";
    char buf[96];
    for (const TxLifecycle& lc : lifecycles) {
        out << lc.tx_id << ',' << lc.t_submitted << ',' << lc.t_assessed << ',';
        if (lc.t_confirmed) out << *lc.t_confirmed;
        out << ',' << to_string(lc.decision) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", lc.r_ml, lc.r_f, lc.r);
        out << buf << ',';
        if (lc.label) out << *lc.label;
        out << ',' << (lc.terminal_failed ? 1 : 0) << '\n';
    }
}

std::vector<TxLifecycle> read_lifecycles_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty lifecycles file", 1);
    std::vector<TxLifecycle> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        f.push_back(cur);
        if (f.size() != 10) throw SchemaError("expected 10 fields", line_no);
        TxLifecycle lc;
        lc.tx_id = std::stoull(f[0]);
        lc.t_submitted = std::stoll(f[1]);
        lc.t_assessed = std::stoll(f[2]);
        if (!f[3].empty()) lc.t_confirmed = std::stoll(f[3]);
        lc.decision = decision_from_string(f[4]);
        lc.r_ml = std::stod(f[5]);
        lc.r_f = std::stod(f[6]);
        lc.r = std::stod(f[7]);
        if (!f[8].empty()) lc.label = std::stoi(f[8]);
        lc.terminal_failed = f[9] == "1";
        out.push_back(lc);
    }
    return out;
}

void write_events_jsonl(const EventLog& events, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    json header{{"schema_version", 1}, {"kind", "events"}, {"count", events.size()}};
    out << header.dump() << '\n';
    for (const NetEvent& e : events) {
        json j{{"t", e.t}, {"type", e.type}, {"block", e.block_index}};
        if (!e.node.empty()) j["node"] = e.node;
        if (e.vote >= 0) j["vote"] = e.vote;
        if (e.value >= 0) j["value"] = e.value;
        out << j.dump() << '\n';
    }
}

EventLog read_events_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    EventLog events;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("event parse error: ") + e.what(), line_no);
        }
        if (!have_header) {
            if (j.value("kind", "") != "events") {
                throw SchemaError("missing events header", line_no);
            }
            have_header = true;
            continue;
        }
        NetEvent e;
        e.t = j.at("t").get<std::int64_t>();
        e.type = j.at("type").get<std::string>();
        e.block_index = j.at("block").get<std::uint64_t>();
        e.node = j.value("node", "");
        e.vote = j.value("vote", -1);
        e.value = j.value("value", std::int64_t{-1});
        events.push_back(std::move(e));
    }
    return events;
}

RunResult run_scenario(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);

    MemoryRun run = run_scenario_in_memory(cfg);
    const fs::path dir(cfg.out_dir);

    RunResult result;
    result.metrics = run.metrics;
    result.stream_size = run.stream.txs.size();
    result.warm_count = run.warm_count;
    result.dataset_fingerprint = stream_fingerprint(run.stream);

    result.ledger_path = (dir / "ledger.jsonl").string();
    export_ledger_file(run.artifacts.ledger, result.ledger_path);
    export_incidents_file(run.artifacts.incidents, (dir / "incidents.jsonl").string());
    write_lifecycles_csv(run.artifacts.lifecycles, (dir / "lifecycles.csv").string());
    write_events_jsonl(run.artifacts.events, (dir / "events.jsonl").string());

    {
        std::ofstream out(dir / "engine_state.json", std::ios::binary);
        if (!out) throw IoError("cannot write engine_state.json");
        out << engine_to_json(run.final_engine) << '\n';
    }

    result.metrics_path = (dir / "metrics.json").string();
    {
        std::ofstream out(result.metrics_path, std::ios::binary);
        if (!out) throw IoError("cannot write metrics.json");
        out << metrics_to_json(run.metrics) << '\n';
    }
    {
        std::ofstream out(dir / "metrics.csv", std::ios::binary);
        out << metrics_csv_header() << '\n' << metrics_csv_row(run.metrics) << '\n';
    }

    // Plot-ready series.
    {
        std::ofstream out(dir / "tc_series.csv", std::ios::binary);
        out << "tx_id,t_submitted,tc_ms\n";
        for (const TxLifecycle& lc : run.artifacts.lifecycles) {
            if (lc.t_confirmed) {
                out << lc.tx_id << ',' << lc.t_submitted << ','
                    << (*lc.t_confirmed - lc.t_submitted) << '\n';
            }
        }
    }
    {
        std::ofstream out(dir / "db_series.csv", std::ios::binary);
        out << "block,db_ms\n";
        std::size_t block_no = 1;
        for (const BroadcastResult& b : run.artifacts.broadcasts) {
            out << block_no++ << ',' << b.propagation_delay << '\n';
        }
    }

    result.manifest_path = (dir / "manifest.json").string();
    {
        json manifest{{"schema_version", kManifestSchemaVersion},
                      {"tool_version", kToolVersion},
                      {"generator_version", run.stream.generator_version},
                      {"feature_layout_version", kFeatureLayoutVersion},
                      {"config", json::parse(run_config_to_json(cfg))},
                      {"dataset_fingerprint", result.dataset_fingerprint},
                      {"effective",
                       {{"amount_cap", cfg.auto_amount_cap
                                           ? run.stream.suggested_amount_cap
                                           : cfg.features.amount_cap},
                        {"fraud_count", run.stream.fraud_count},
                        {"fraud_rate", cfg.scenario.fraud_rate},
                        {"warm_count", run.warm_count},
                        {"n_tx", run.stream.txs.size()}}}};
        std::ofstream out(result.manifest_path, std::ios::binary);
        if (!out) throw IoError("cannot write manifest.json");
        out << manifest.dump(2) << '\n';
    }
    return result;
}

} // namespace riskchain
