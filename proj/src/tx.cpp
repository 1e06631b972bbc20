#include "riskchain/tx.hpp"

#include "riskchain/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace riskchain {

namespace {

// Built-in region coordinates (major financial hubs).
constexpr std::array<GeoPoint, 12> kRegions{{
    {40.71, -74.01},  // 0  New York
    {51.51, -0.13},   // 1  London
    {35.68, 139.69},  // 2  Tokyo
    {1.35, 103.82},   // 3  Singapore
    {50.11, 8.68},    // 4  Frankfurt
    {22.32, 114.17},  // 5  Hong Kong
    {19.08, 72.88},   // 6  Mumbai
    {-23.55, -46.63}, // 7  Sao Paulo
    {25.20, 55.27},   // 8  Dubai
    {43.65, -79.38},  // 9  Toronto
    {48.86, 2.35},    // 10 Paris
    {-33.87, 151.21}, // 11 Sydney
}};

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kMsPerHour = 3'600'000.0;

double deg2rad(double d) { return d * M_PI / 180.0; }

} // namespace

GeoPoint Geo::resolve() const {
    if (coords) return *coords;
    return kRegions[region % kRegions.size()];
}

double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
    double lat1 = deg2rad(a.lat), lat2 = deg2rad(b.lat);
    double dlat = lat2 - lat1;
    double dlon = deg2rad(b.lon - a.lon);
    double s = std::sin(dlat / 2), t = std::sin(dlon / 2);
    double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

bool BehaviorVector::finite() const {
    return std::isfinite(tx_rate) && std::isfinite(amount_zscore) &&
           std::isfinite(device_consistency) && std::isfinite(geo_jump) &&
           std::isfinite(dormancy_gap);
}

std::optional<std::uint32_t> UserProfile::modal_device() const {
    std::optional<std::uint32_t> best;
    std::uint64_t best_count = 0;
    for (const auto& [device, n] : device_counts) {
        if (n > best_count) { // map order makes ties resolve to the smaller id
            best = device;
            best_count = n;
        }
    }
    return best;
}

void update_profile(UserProfile& profile, const Transaction& tx, const FeatureConfig& cfg) {
    if (profile.count > 0 && tx.timestamp < profile.last_timestamp) {
        throw DomainError("out-of-order transaction for account '" + profile.account +
                          "': " + std::to_string(tx.timestamp) + " < " +
                          std::to_string(profile.last_timestamp));
    }
    profile.count += 1;
    double delta = tx.amount - profile.mean;
    profile.mean += delta / static_cast<double>(profile.count);
    profile.m2 += delta * (tx.amount - profile.mean);

    profile.last_timestamp = tx.timestamp;
    profile.last_geo = tx.geo;
    profile.device_counts[tx.device] += 1;

    profile.window.emplace_back(tx.timestamp, tx.device);
    std::int64_t horizon = tx.timestamp - cfg.window_ms;
    while (!profile.window.empty() && profile.window.front().first <= horizon) {
        profile.window.pop_front();
    }
}

BehaviorVector derive_behavior(const UserProfile& profile, const Transaction& tx,
                               const FeatureConfig& cfg) {
    BehaviorVector bv;
    bool first = profile.count == 0;

    // Rolling rate counts the transaction being scored plus the profile's
    // window entries still inside the horizon.
    std::int64_t horizon = tx.timestamp - cfg.window_ms;
    std::uint64_t in_window = 1;
    std::uint32_t on_modal = 0;
    auto modal = profile.modal_device();
    std::uint32_t modal_id = modal.value_or(tx.device);
    if (tx.device == modal_id) on_modal += 1;
    for (const auto& [ts, device] : profile.window) {
        if (ts > horizon && ts <= tx.timestamp) {
            in_window += 1;
            if (device == modal_id) on_modal += 1;
        }
    }
    double window_hours = static_cast<double>(cfg.window_ms) / kMsPerHour;
    bv.tx_rate = static_cast<double>(in_window) / window_hours;
    bv.device_consistency = static_cast<double>(on_modal) / static_cast<double>(in_window);

    double var = profile.variance();
    bv.amount_zscore = (var > 0.0) ? (tx.amount - profile.mean) / std::sqrt(var) : 0.0;

    if (!first) {
        double gap_h =
            static_cast<double>(tx.timestamp - profile.last_timestamp) / kMsPerHour;
        bv.dormancy_gap = gap_h;
        if (profile.last_geo) {
            double dist = great_circle_km(profile.last_geo->resolve(), tx.geo.resolve());
            if (dist > 0.0) {
                // Zero elapsed time with nonzero displacement is an implausible jump.
                bv.geo_jump = (gap_h <= 0.0 || dist / gap_h > cfg.geo_speed_limit_kmh)
                                  ? 1.0
                                  : 0.0;
            }
        }
    }
    return bv;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

FeatureVector featurize(const Transaction& tx, const FeatureConfig& cfg) {
    if (!tx.behavior) {
        throw DomainError("featurize: transaction " + std::to_string(tx.tx_id) +
                          " has no behavior vector");
    }
    const BehaviorVector& bv = *tx.behavior;
    if (!std::isfinite(tx.amount) || !bv.finite()) {
        throw DomainError("featurize: non-finite input on transaction " +
                          std::to_string(tx.tx_id));
    }
    if (tx.amount < 0.0) {
        throw DomainError("featurize: negative amount on transaction " +
                          std::to_string(tx.tx_id));
    }

    std::int64_t day = cfg.day_length_ms;
    std::int64_t in_day = ((tx.timestamp % day) + day) % day;

    FeatureVector fv(kFeatureDim);
    fv[0] = std::min(tx.amount / cfg.amount_cap, 1.0);
    fv[1] = static_cast<double>(in_day) / static_cast<double>(day);
    fv[2] = logistic((bv.tx_rate - cfg.rate_mid) / cfg.rate_scale);
    fv[3] = logistic(std::abs(bv.amount_zscore) / cfg.zscore_scale);
    fv[4] = bv.device_consistency;
    fv[5] = bv.geo_jump;
    fv[6] = logistic((bv.dormancy_gap - cfg.dormancy_mid_h) / cfg.dormancy_scale_h);
    return fv;
}

} // namespace riskchain
