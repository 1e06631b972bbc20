#pragma once

#include "riskchain/tx.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riskchain {

/// Weights over the planted fraud patterns; non-negative, sum > 0.
struct PatternMix {
    double value_outlier = 0.4;
    double micro_burst = 0.3;
    double off_hours = 0.2;
    double geo_jump = 0.1;
    double multi_step_chain = 0.0;

    double sum() const;
};

/// Shape parameters of the synthetic generator. Documented defaults; all of
/// them land in the run manifest so a stream is reproducible from it.
struct GenParams {
    double user_mean_mu = 4.605170185988092; ///< ln(100): median user mean amount
    double user_mean_sigma = 0.8;
    double tx_sigma = 0.4;          ///< per-tx lognormal spread around the user mean
    std::int64_t day_length_ms = 600000; ///< compressed virtual day (matches FeatureConfig)
    double night_start = 22.0 / 24.0;    ///< day fraction where night begins
    double night_end = 8.0 / 24.0;       ///< day fraction where night ends
    double night_intensity = 0.3;        ///< arrival-rate multiplier at night
    double start_hour = 9.0;             ///< stream epoch position within the day
    double alt_device_prob = 0.1;
    double dormant_user_frac = 0.15;     ///< victim pool for planted patterns
    double dormant_pick_weight = 0.005;   ///< relative legit activity of pool users
    int seeds_per_dormant = 6;           ///< history txs planted for each pool user
    double outlier_multiplier = 8.0;
    double off_hours_multiplier = 2.5;
    double chain_multiplier = 6.0;
    double burst_amount_frac = 0.1;
    int burst_length = 8;
    int chain_min_hops = 4;
    int chain_max_hops = 6;
};

struct ScenarioSpec {
    std::string name = "custom"; ///< S1 | S2 | S3 | custom
    std::size_t n_tx = 50000;
    double fraud_rate = 0.001;
    std::size_t n_users = 200;
    double arrival_mean_ms = 100.0; ///< mean inter-arrival at daytime intensity
    PatternMix pattern_mix;
    std::uint64_t seed = 1;
    GenParams params;

    void validate() const;

    /// Named presets: S1 fraud 0.1%, S2 1%, S3 5% with multi-step chains in
    /// the mix. n_tx defaults to 50,000 and scales for desk-size runs.
    static ScenarioSpec preset(const std::string& name, std::size_t n_tx = 50000,
                               std::uint64_t seed = 1);
};

struct LabeledStream {
    std::vector<Transaction> txs; ///< behavior unset; populated at assessment
    ScenarioSpec spec;
    std::string generator_version;
    double suggested_amount_cap = 0.0; ///< p99.9 of the legit amounts (nearest rank)
    std::size_t fraud_count = 0;
};

/// Deterministic scenario generation: a diurnal legit skeleton (arrivals,
/// users, amounts, devices) drawn from one stream, fraud patterns planted
/// over it from a second stream, so streams with equal seeds share the same
/// arrival skeleton across scenarios.
LabeledStream generate(const ScenarioSpec& spec);

/// Per-pattern deviation thresholds used by the generator self-test.
struct SeparabilityThresholds {
    double zscore = 3.0;
    double tx_rate = 350.0;
    double dormancy_h = 0.15;
    double amount_component = 0.8;
    double device_consistency = 0.5;
};

struct SeparabilityReport {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::uint64_t first_failed_tx = 0;
};

/// Replays the stream through the profile/featurization machinery and checks
/// that every labeled-fraud transaction deviates beyond at least one
/// threshold in some behavior/feature dimension.
SeparabilityReport check_separability(const LabeledStream& stream,
                                      const FeatureConfig& fcfg,
                                      const SeparabilityThresholds& thresholds = {});

/// Column-name mapping for external CSV ingestion. Mandatory columns must be
/// present in the header; optional ones default per the domain rules.
struct CsvSchema {
    std::string amount = "amount";
    std::string timestamp = "timestamp";
    std::string sender = "sender";
    std::string receiver = "receiver";
    std::optional<std::string> tx_id = "tx_id";
    std::optional<std::string> geo = "geo";
    std::optional<std::string> device = "device";
    std::optional<std::string> label = "label";
};

/// Loads and timestamp-sorts a CSV dataset. Timestamps are integer virtual
/// milliseconds or ISO-8601 (auto-detected per value). Malformed rows raise
/// SchemaError with the line number.
LabeledStream load_csv(const std::string& path, const CsvSchema& schema = {});

/// Writes the stream in the same schema load_csv reads (round-trip safe:
/// amounts carry 17 significant digits).
void write_csv(const LabeledStream& stream, std::ostream& out);
void write_csv_file(const LabeledStream& stream, const std::string& path);

/// Canonical SHA-256 fingerprint of the labeled stream (tx bytes + label).
std::string stream_fingerprint(const LabeledStream& stream);

} // namespace riskchain
