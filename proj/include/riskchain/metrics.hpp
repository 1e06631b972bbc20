#pragma once

#include "riskchain/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riskchain {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
};

/// Which decisions count as a positive (fraud) prediction. The default maps
/// only outright rejects; monitored transactions may be switched in.
struct PositiveRule {
    bool include_monitor = false;

    bool is_positive(Decision d) const {
        return d == Decision::Reject || (include_monitor && d == Decision::Monitor);
    }
};

/// Tallies predictions against ground truth. Throws DomainError naming the
/// first transaction that lacks a label.
ConfusionMatrix confusion(std::span<const TxLifecycle> lifecycles, PositiveRule rule);

/// (TP+TN)/total; DomainError on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

/// TP/(TP+FP); DomainError when no positive predictions exist (surfaced,
/// never defaulted).
double precision(const ConfusionMatrix& cm);

/// Plumbing extras beyond the core formulas.
double recall(const ConfusionMatrix& cm);
double f1(const ConfusionMatrix& cm);

/// Aggregates over integer virtual-millisecond samples. median and p95 use
/// the nearest-rank estimator.
struct TimingStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    std::int64_t median = 0;
    std::int64_t p95 = 0;
    std::int64_t min = 0;
    std::int64_t max = 0;
};

TimingStats timing_stats(std::vector<std::int64_t> samples);

struct LatencyBreakdown {
    double edge_mean = 0.0;
    double ai_mean = 0.0;
    double blockchain_mean = 0.0;
    double total_mean = 0.0; ///< equals the sum of the three parts
};

struct MetricsReport {
    std::string scenario;
    std::uint64_t seed = 0;

    ConfusionMatrix cm;
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::vector<std::string> undefined_metrics;

    TimingStats tc;  ///< confirmation times, confirmed transactions only
    TimingStats db;  ///< per-block propagation delays
    LatencyBreakdown latency;

    std::size_t n_evaluated = 0;
    std::size_t n_accept = 0;
    std::size_t n_monitor = 0;
    std::size_t n_reject = 0;
    std::size_t n_confirmed = 0;
    std::size_t n_unconfirmed = 0; ///< lifecycles without t_confirmed
    std::size_t n_incidents = 0;
    std::size_t n_failed = 0;
    std::size_t n_blocks = 0;
};

/// T_c / D_b / end-to-end decomposition from run artifacts. Lifecycles
/// missing t_confirmed are counted separately and excluded from T_c.
void timing_metrics(std::span<const TxLifecycle> lifecycles,
                    std::span<const BroadcastResult> broadcasts,
                    std::int64_t edge_cost_ms, std::int64_t ai_cost_ms,
                    MetricsReport& report);

MetricsReport compute_metrics(const RunArtifacts& artifacts, const PipelineConfig& cfg,
                              PositiveRule rule = {});

std::string metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const std::string& text);

/// Flat row per (scenario, seed) for spreadsheet aggregation.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& report);

} // namespace riskchain
