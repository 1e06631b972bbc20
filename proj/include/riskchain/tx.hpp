#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riskchain {

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

/// Location context of a transaction: a small region id, optionally carrying
/// explicit coordinates. When coords is empty the id resolves against a fixed
/// built-in region table (modulo its size).
struct Geo {
    std::uint32_t region = 0;
    std::optional<GeoPoint> coords;

    GeoPoint resolve() const;
};

double great_circle_km(const GeoPoint& a, const GeoPoint& b);

/// Behavioral attributes derived from the sender's history at scoring time.
struct BehaviorVector {
    double tx_rate = 0.0;            ///< transactions per hour over the rolling window
    double amount_zscore = 0.0;      ///< deviation of amount from the sender's mean
    double device_consistency = 1.0; ///< fraction of recent txs from the modal device
    double geo_jump = 0.0;           ///< 1 when the location change is implausibly fast
    double dormancy_gap = 0.0;       ///< hours since the sender's previous transaction

    bool finite() const;
};

struct Transaction {
    std::uint64_t tx_id = 0;
    std::string sender;
    std::string receiver;
    double amount = 0.0;
    std::int64_t timestamp = 0; ///< virtual ms since simulation epoch
    Geo geo;
    std::uint32_t device = 0;
    std::optional<BehaviorVector> behavior;
    std::optional<int> label; ///< ground truth: 0 legitimate, 1 fraudulent
};

/// Per-sender running state. Amount moments use Welford's one-pass scheme;
/// variance is the population variance (0 for a single observation).
struct UserProfile {
    std::string account;
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t last_timestamp = 0;
    std::optional<Geo> last_geo;
    std::map<std::uint32_t, std::uint64_t> device_counts;
    std::deque<std::pair<std::int64_t, std::uint32_t>> window; ///< (timestamp, device)

    double variance() const { return count > 0 ? m2 / static_cast<double>(count) : 0.0; }
    std::optional<std::uint32_t> modal_device() const;
};

/// Normalization and behavior-derivation parameters. Every value is recorded
/// in the run manifest; defaults are tuned to the default generator.
struct FeatureConfig {
    double amount_cap = 10000.0;          ///< min-max cap for the amount component
    std::int64_t day_length_ms = 600000;  ///< virtual day driving the hour-of-day component
    std::int64_t window_ms = 60000;       ///< rolling window for tx_rate / device consistency
    double rate_mid = 350.0;              ///< logistic midpoint for tx_rate (per hour)
    double rate_scale = 50.0;
    double zscore_scale = 2.5;            ///< logistic scale on |amount_zscore|
    double dormancy_mid_h = 0.05;         ///< logistic midpoint for dormancy (hours)
    double dormancy_scale_h = 0.02;
    double geo_speed_limit_kmh = 900.0;   ///< plausibility speed for geo_jump
};

/// Fixed-dimension feature vector; every component lies in [0,1].
/// Layout v1 (d = 7):
///   [0] amount min-maxed against amount_cap
///   [1] hour-of-day position within the virtual day
///   [2] tx_rate, logistic squash
///   [3] |amount_zscore|, logistic squash
///   [4] device_consistency
///   [5] geo_jump flag
///   [6] dormancy_gap, logistic squash
using FeatureVector = std::vector<double>;

inline constexpr std::size_t kFeatureDim = 7;
inline constexpr int kFeatureLayoutVersion = 1;

/// Folds a transaction into the sender's profile.
/// Throws DomainError when tx.timestamp precedes the profile's last event.
void update_profile(UserProfile& profile, const Transaction& tx, const FeatureConfig& cfg);

/// Derives the behavior vector for tx against its sender's pre-update profile.
/// Degenerate histories yield the documented defaults: zscore 0 when the
/// variance is 0, dormancy 0 and geo_jump 0 for a first-ever transaction.
BehaviorVector derive_behavior(const UserProfile& profile, const Transaction& tx,
                               const FeatureConfig& cfg);

/// Pure normalization of a behavior-populated transaction into [0,1]^7.
/// Throws DomainError on a missing behavior vector or any non-finite input.
FeatureVector featurize(const Transaction& tx, const FeatureConfig& cfg);

double logistic(double x);

} // namespace riskchain
