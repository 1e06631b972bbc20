#include "riskchain/metrics.hpp"

#include "riskchain/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riskchain {

using nlohmann::json;

ConfusionMatrix confusion(std::span<const TxLifecycle> lifecycles, PositiveRule rule) {
    ConfusionMatrix cm;
    for (const TxLifecycle& lc : lifecycles) {
        if (!lc.label) {
            throw DomainError("transaction " + std::to_string(lc.tx_id) +
                              " has no ground-truth label");
        }
        bool predicted = rule.is_positive(lc.decision);
        bool actual = *lc.label == 1;
        if (predicted && actual) {
            cm.tp += 1;
        } else if (predicted && !actual) {
            cm.fp += 1;
        } else if (!predicted && actual) {
            cm.fn += 1;
        } else {
            cm.tn += 1;
        }
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DomainError("accuracy undefined: empty confusion matrix");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

double precision(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fp == 0) {
        throw DomainError("precision undefined: no positive predictions");
    }
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

double recall(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) throw DomainError("recall undefined: no positive labels");
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double f1(const ConfusionMatrix& cm) {
    double p = precision(cm);
    double r = recall(cm);
    if (p + r == 0.0) throw DomainError("f1 undefined: precision + recall is zero");
    return 2.0 * p * r / (p + r);
}

TimingStats timing_stats(std::vector<std::int64_t> samples) {
    TimingStats stats;
    stats.count = samples.size();
    if (samples.empty()) return stats;
    std::sort(samples.begin(), samples.end());
    auto nearest_rank = [&](double q) {
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(q * static_cast<double>(samples.size())));
        return samples[std::max<std::size_t>(rank, 1) - 1];
    };
    std::int64_t sum = std::accumulate(samples.begin(), samples.end(), std::int64_t{0});
    stats.mean = static_cast<double>(sum) / static_cast<double>(samples.size());
    stats.median = nearest_rank(0.50);
    stats.p95 = nearest_rank(0.95);
    stats.min = samples.front();
    stats.max = samples.back();
    return stats;
}

void timing_metrics(std::span<const TxLifecycle> lifecycles,
                    std::span<const BroadcastResult> broadcasts,
                    std::int64_t edge_cost_ms, std::int64_t ai_cost_ms,
                    MetricsReport& report) {
    std::vector<std::int64_t> tc;
    std::int64_t blockchain_sum = 0;
    for (const TxLifecycle& lc : lifecycles) {
        if (!lc.t_confirmed) {
            report.n_unconfirmed += 1;
            continue;
        }
        std::int64_t dt = *lc.t_confirmed - lc.t_submitted;
        tc.push_back(dt);
        blockchain_sum += dt - edge_cost_ms - ai_cost_ms;
    }
    std::size_t n = tc.size();
    report.n_confirmed = n;
    report.tc = timing_stats(std::move(tc));

    std::vector<std::int64_t> db;
    db.reserve(broadcasts.size());
    for (const BroadcastResult& b : broadcasts) db.push_back(b.propagation_delay);
    report.n_blocks = db.size();
    report.db = timing_stats(std::move(db));

    if (n > 0) {
        // Integer sums keep the decomposition identity exact: the total mean
        // is (edge + ai + blockchain) sums over the same n.
        std::int64_t edge_sum = edge_cost_ms * static_cast<std::int64_t>(n);
        std::int64_t ai_sum = ai_cost_ms * static_cast<std::int64_t>(n);
        report.latency.edge_mean = static_cast<double>(edge_sum) / static_cast<double>(n);
        report.latency.ai_mean = static_cast<double>(ai_sum) / static_cast<double>(n);
        report.latency.blockchain_mean =
            static_cast<double>(blockchain_sum) / static_cast<double>(n);
        report.latency.total_mean =
            static_cast<double>(edge_sum + ai_sum + blockchain_sum) / static_cast<double>(n);
    }
}

MetricsReport compute_metrics(const RunArtifacts& artifacts, const PipelineConfig& cfg,
                              PositiveRule rule) {
    MetricsReport report;
    report.n_evaluated = artifacts.lifecycles.size();
    for (const TxLifecycle& lc : artifacts.lifecycles) {
        switch (lc.decision) {
        case Decision::Accept: report.n_accept += 1; break;
        case Decision::Monitor: report.n_monitor += 1; break;
        case Decision::Reject: report.n_reject += 1; break;
        }
    }
    report.n_incidents = artifacts.incidents.size();
    report.n_failed = artifacts.failed_tx_ids.size();

    report.cm = confusion(artifacts.lifecycles, rule);
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

    timing_metrics(artifacts.lifecycles, artifacts.broadcasts, cfg.edge_cost_ms,
                   cfg.ai_cost_ms, report);
    return report;
}

namespace {

json stats_to_json(const TimingStats& s) {
    return {{"count", s.count}, {"mean", s.mean},   {"median", s.median},
            {"p95", s.p95},     {"min", s.min},     {"max", s.max}};
}

TimingStats stats_from_json(const json& j) {
    TimingStats s;
    s.count = j.at("count").get<std::uint64_t>();
    s.mean = j.at("mean").get<double>();
    s.median = j.at("median").get<std::int64_t>();
    s.p95 = j.at("p95").get<std::int64_t>();
    s.min = j.at("min").get<std::int64_t>();
    s.max = j.at("max").get<std::int64_t>();
    return s;
}

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

} // namespace

std::string metrics_to_json(const MetricsReport& r) {
    json j{{"schema_version", 1},
           {"scenario", r.scenario},
           {"seed", r.seed},
           {"confusion", {{"tp", r.cm.tp}, {"tn", r.cm.tn}, {"fp", r.cm.fp}, {"fn", r.cm.fn}}},
           {"accuracy", optional_to_json(r.accuracy)},
           {"precision", optional_to_json(r.precision)},
           {"recall", optional_to_json(r.recall)},
           {"f1", optional_to_json(r.f1)},
           {"undefined_metrics", r.undefined_metrics},
           {"tc_ms", stats_to_json(r.tc)},
           {"db_ms", stats_to_json(r.db)},
           {"latency_ms",
            {{"edge_mean", r.latency.edge_mean},
             {"ai_mean", r.latency.ai_mean},
             {"blockchain_mean", r.latency.blockchain_mean},
             {"total_mean", r.latency.total_mean}}},
           {"counts",
            {{"evaluated", r.n_evaluated},
             {"accept", r.n_accept},
             {"monitor", r.n_monitor},
             {"reject", r.n_reject},
             {"confirmed", r.n_confirmed},
             {"unconfirmed", r.n_unconfirmed},
             {"incidents", r.n_incidents},
             {"failed", r.n_failed},
             {"blocks", r.n_blocks}}}};
    return j.dump(2);
}

MetricsReport metrics_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("metrics parse error: ") + e.what());
    }
    MetricsReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const json& cm = j.at("confusion");
    r.cm = {cm.at("tp").get<std::uint64_t>(), cm.at("tn").get<std::uint64_t>(),
            cm.at("fp").get<std::uint64_t>(), cm.at("fn").get<std::uint64_t>()};
    r.accuracy = optional_from_json(j.at("accuracy"));
    r.precision = optional_from_json(j.at("precision"));
    r.recall = optional_from_json(j.at("recall"));
    r.f1 = optional_from_json(j.at("f1"));
    r.undefined_metrics = j.at("undefined_metrics").get<std::vector<std::string>>();
    r.tc = stats_from_json(j.at("tc_ms"));
    r.db = stats_from_json(j.at("db_ms"));
    const json& lat = j.at("latency_ms");
    r.latency = {lat.at("edge_mean").get<double>(), lat.at("ai_mean").get<double>(),
                 lat.at("blockchain_mean").get<double>(),
                 lat.at("total_mean").get<double>()};
    const json& c = j.at("counts");
    r.n_evaluated = c.at("evaluated").get<std::size_t>();
    r.n_accept = c.at("accept").get<std::size_t>();
    r.n_monitor = c.at("monitor").get<std::size_t>();
    r.n_reject = c.at("reject").get<std::size_t>();
    r.n_confirmed = c.at("confirmed").get<std::size_t>();
    r.n_unconfirmed = c.at("unconfirmed").get<std::size_t>();
    r.n_incidents = c.at("incidents").get<std::size_t>();
    r.n_failed = c.at("failed").get<std::size_t>();
    r.n_blocks = c.at("blocks").get<std::size_t>();
    return r;
}

std::string metrics_csv_header() {
    return "scenario,seed,tp,tn,fp,fn,accuracy,precision,recall,f1,"
           "tc_mean,tc_median,tc_p95,db_mean,db_max,"
           "l_edge_mean,l_ai_mean,l_blockchain_mean,l_total_mean,"
           "evaluated,accept,monitor,reject,confirmed,incidents,failed,blocks";
}

std::string metrics_csv_row(const MetricsReport& r) {
    std::ostringstream out;
    auto opt = [](const std::optional<double>& v) {
        return v ? std::to_string(*v) : std::string("NA");
    };
    out << r.scenario << ',' << r.seed << ',' << r.cm.tp << ',' << r.cm.tn << ','
        << r.cm.fp << ',' << r.cm.fn << ',' << opt(r.accuracy) << ','
        << opt(r.precision) << ',' << opt(r.recall) << ',' << opt(r.f1) << ','
        << r.tc.mean << ',' << r.tc.median << ',' << r.tc.p95 << ',' << r.db.mean << ','
        << r.db.max << ',' << r.latency.edge_mean << ',' << r.latency.ai_mean << ','
        << r.latency.blockchain_mean << ',' << r.latency.total_mean << ','
        << r.n_evaluated << ',' << r.n_accept << ',' << r.n_monitor << ','
        << r.n_reject << ',' << r.n_confirmed << ',' << r.n_incidents << ','
        << r.n_failed << ',' << r.n_blocks;
    return out.str();
}

} // namespace riskchain
