#include "riskchain/datagen.hpp"

#include "riskchain/bytes.hpp"
#include "riskchain/crypto.hpp"
#include "riskchain/errors.hpp"
#include "riskchain/ledger.hpp"
#include "riskchain/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace riskchain {

namespace {
constexpr const char* kGeneratorVersion = "datagen-v1";
constexpr std::uint32_t kRegionCount = 12;
constexpr std::uint32_t kHomeDeviceBase = 1000;
constexpr std::uint32_t kAltDeviceBase = 2000;
constexpr std::uint32_t kFraudDeviceBase = 100000;
} // namespace

double PatternMix::sum() const {
    return value_outlier + micro_burst + off_hours + geo_jump + multi_step_chain;
}

void ScenarioSpec::validate() const {
    if (n_tx < 1) throw ConfigError("n_tx must be at least 1");
    if (n_users == 0) throw ConfigError("n_users must be at least 1");
    if (!(fraud_rate >= 0.0 && fraud_rate <= 1.0)) {
        throw ConfigError("fraud_rate must lie in [0,1]");
    }
    if (arrival_mean_ms <= 0.0) throw ConfigError("arrival_mean_ms must be positive");
    const PatternMix& m = pattern_mix;
    if (m.value_outlier < 0 || m.micro_burst < 0 || m.off_hours < 0 || m.geo_jump < 0 ||
        m.multi_step_chain < 0) {
        throw ConfigError("pattern_mix weights must be non-negative");
    }
    if (!(m.sum() > 0.0)) throw ConfigError("pattern_mix weights must sum above zero");
    if (params.day_length_ms <= 0) throw ConfigError("day_length_ms must be positive");
}

ScenarioSpec ScenarioSpec::preset(const std::string& name, std::size_t n_tx,
                                  std::uint64_t seed) {
    ScenarioSpec spec;
    spec.name = name;
    spec.n_tx = n_tx;
    spec.seed = seed;
    if (name == "S1") {
        spec.fraud_rate = 0.001;
        spec.pattern_mix = {0.4, 0.3, 0.2, 0.1, 0.0};
    } else if (name == "S2") {
        spec.fraud_rate = 0.01;
        spec.pattern_mix = {0.4, 0.3, 0.2, 0.1, 0.0};
    } else if (name == "S3") {
        spec.fraud_rate = 0.05;
        spec.pattern_mix = {0.3, 0.2, 0.15, 0.15, 0.2};
    } else {
        throw ConfigError("unknown scenario preset '" + name + "' (expected S1, S2 or S3)");
    }
    return spec;
}

namespace {

struct UserState {
    std::string account;
    double mean_amount = 0.0;
    std::uint32_t home_region = 0;
    std::uint32_t home_device = 0;
    std::uint32_t alt_device = 0;
    std::uint32_t last_region = 0; ///< tracked while planting geo patterns
};

bool is_night_fraction(double day_frac, const GenParams& p) {
    return day_frac >= p.night_start || day_frac < p.night_end;
}

bool is_night(std::int64_t t, const GenParams& p) {
    std::int64_t day = p.day_length_ms;
    double frac = static_cast<double>(((t % day) + day) % day) / static_cast<double>(day);
    return is_night_fraction(frac, p);
}

// Farthest region in the built-in table from the given one; used to make
// planted cross-border hops unambiguous jumps.
std::uint32_t farthest_region(std::uint32_t from) {
    double best = -1.0;
    std::uint32_t pick = from;
    GeoPoint origin = Geo{from % kRegionCount, std::nullopt}.resolve();
    for (std::uint32_t r = 0; r < kRegionCount; ++r) {
        double d = great_circle_km(origin, Geo{r, std::nullopt}.resolve());
        if (d > best) {
            best = d;
            pick = r;
        }
    }
    return pick;
}

enum class Pattern { ValueOutlier, MicroBurst, OffHours, GeoJump, MultiStepChain };

} // namespace

LabeledStream generate(const ScenarioSpec& spec) {
    spec.validate();
    const GenParams& p = spec.params;

    Rng legit(mix_seed(spec.seed, 1));
    Rng fraud(mix_seed(spec.seed, 2));

    // Users. The tail of the index range forms the rarely-active victim pool.
    std::vector<UserState> users(spec.n_users);
    for (std::size_t i = 0; i < spec.n_users; ++i) {
        UserState& u = users[i];
        char buf[16];
        std::snprintf(buf, sizeof(buf), "u%05zu", i);
        u.account = buf;
        u.mean_amount = legit.next_lognormal(p.user_mean_mu, p.user_mean_sigma);
        u.home_region = static_cast<std::uint32_t>(i % kRegionCount);
        u.home_device = kHomeDeviceBase + static_cast<std::uint32_t>(i);
        u.alt_device = kAltDeviceBase + static_cast<std::uint32_t>(i);
        u.last_region = u.home_region;
    }

    std::size_t desired_pool =
        static_cast<std::size_t>(std::llround(p.dormant_user_frac * spec.n_users));
    std::size_t seeds_cap = spec.n_tx / (5 * std::max(1, p.seeds_per_dormant));
    std::size_t n_dormant = std::min(desired_pool, seeds_cap);
    if (n_dormant >= spec.n_users) n_dormant = spec.n_users - 1;
    std::size_t n_active = spec.n_users - n_dormant;
    std::size_t first_dormant = n_active;
    std::size_t n_seeds = n_dormant * static_cast<std::size_t>(p.seeds_per_dormant);

    // Arrival skeleton: exponential gaps thinned by the diurnal intensity.
    std::vector<Transaction> txs(spec.n_tx);
    std::int64_t t = std::llround(p.start_hour / 24.0 *
                                  static_cast<double>(p.day_length_ms));
    for (std::size_t i = 0; i < spec.n_tx; ++i) {
        double gap = legit.next_exponential(spec.arrival_mean_ms);
        double intensity = is_night(t, p) ? p.night_intensity : 1.0;
        t += std::max<std::int64_t>(1, std::llround(gap / intensity));
        txs[i].timestamp = t;
    }

    // Legit base assignment. Draw counts per position are fixed, so streams
    // with equal seeds keep identical skeletons whatever gets planted later.
    auto pick_user = [&]() -> std::size_t {
        double span = static_cast<double>(n_active) +
                      p.dormant_pick_weight * static_cast<double>(n_dormant);
        double r = legit.next_double() * span;
        if (r < static_cast<double>(n_active) || n_dormant == 0) {
            std::size_t idx = static_cast<std::size_t>(r);
            return std::min(idx, n_active - 1);
        }
        std::size_t idx = static_cast<std::size_t>(
            (r - static_cast<double>(n_active)) / p.dormant_pick_weight);
        return first_dormant + std::min(idx, n_dormant - 1);
    };

    for (std::size_t i = 0; i < spec.n_tx; ++i) {
        Transaction& tx = txs[i];
        std::size_t sender_idx;
        bool seed_tx = i < n_seeds && n_dormant > 0;
        if (seed_tx) {
            sender_idx = first_dormant + (i % n_dormant);
        } else {
            sender_idx = pick_user();
        }
        const UserState& u = users[sender_idx];
        double z = legit.next_normal();
        double amount = u.mean_amount * std::exp(p.tx_sigma * z - 0.5 * p.tx_sigma * p.tx_sigma);
        bool alt = !seed_tx && legit.next_double() < p.alt_device_prob;
        std::size_t recv = legit.next_below(spec.n_users);
        if (recv == sender_idx) recv = (recv + 1) % spec.n_users;

        tx.tx_id = i + 1;
        tx.sender = u.account;
        tx.receiver = spec.n_users > 1 ? users[recv].account : u.account + "-ext";
        tx.amount = amount;
        tx.geo.region = u.home_region;
        tx.device = alt ? u.alt_device : u.home_device;
        tx.label = 0;
    }

    // Fraud planting over the skeleton; seeds stay untouched so every pool
    // victim keeps a clean amount history.
    std::size_t target = static_cast<std::size_t>(
        std::llround(spec.fraud_rate * static_cast<double>(spec.n_tx)));
    std::vector<bool> taken(spec.n_tx, false);
    for (std::size_t i = 0; i < n_seeds; ++i) taken[i] = true;

    std::vector<std::size_t> night_positions;
    for (std::size_t i = n_seeds; i < spec.n_tx; ++i) {
        if (is_night(txs[i].timestamp, p)) night_positions.push_back(i);
    }

    auto pick_victim = [&]() -> std::size_t {
        if (n_dormant > 0) return first_dormant + fraud.next_below(n_dormant);
        return fraud.next_below(spec.n_users);
    };

    auto find_free_single = [&](const std::vector<std::size_t>* pool) -> std::optional<std::size_t> {
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::size_t pos;
            if (pool && !pool->empty()) {
                pos = (*pool)[fraud.next_below(pool->size())];
            } else {
                pos = n_seeds + fraud.next_below(spec.n_tx - n_seeds);
            }
            if (!taken[pos]) return pos;
        }
        for (std::size_t i = n_seeds; i < spec.n_tx; ++i) {
            if (!taken[i]) return i;
        }
        return std::nullopt;
    };

    auto find_free_run = [&](std::size_t len) -> std::optional<std::size_t> {
        if (spec.n_tx < n_seeds + len) return std::nullopt;
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::size_t start = n_seeds + fraud.next_below(spec.n_tx - n_seeds - len + 1);
            bool free = true;
            for (std::size_t j = start; j < start + len; ++j) {
                if (taken[j]) {
                    free = false;
                    break;
                }
            }
            if (free) return start;
        }
        return std::nullopt;
    };

    std::uint32_t fraud_device = kFraudDeviceBase;
    std::size_t mule_id = 0;
    std::size_t planted = 0;

    auto plant_single = [&](std::size_t pos, std::size_t victim, double amount,
                            std::uint32_t region, std::uint32_t device) {
        Transaction& tx = txs[pos];
        tx.sender = users[victim].account;
        if (tx.receiver == tx.sender) {
            tx.receiver = users[(victim + 1) % spec.n_users].account;
        }
        tx.amount = amount;
        tx.geo = Geo{region, std::nullopt};
        tx.device = device;
        tx.label = 1;
        users[victim].last_region = region;
        taken[pos] = true;
        planted += 1;
    };

    const double mix_sum = spec.pattern_mix.sum();
    auto pick_pattern = [&]() -> Pattern {
        double r = fraud.next_double() * mix_sum;
        const PatternMix& m = spec.pattern_mix;
        if ((r -= m.value_outlier) < 0) return Pattern::ValueOutlier;
        if ((r -= m.micro_burst) < 0) return Pattern::MicroBurst;
        if ((r -= m.off_hours) < 0) return Pattern::OffHours;
        if ((r -= m.geo_jump) < 0) return Pattern::GeoJump;
        return Pattern::MultiStepChain;
    };

    while (planted < target) {
        std::size_t remaining = target - planted;
        Pattern pattern = pick_pattern();
        if (pattern == Pattern::MicroBurst &&
            static_cast<std::size_t>(p.burst_length) > remaining) {
            pattern = Pattern::ValueOutlier;
        }
        if (pattern == Pattern::MultiStepChain &&
            static_cast<std::size_t>(p.chain_min_hops) > remaining) {
            pattern = Pattern::ValueOutlier;
        }

        if (pattern == Pattern::ValueOutlier) {
            auto pos = find_free_single(nullptr);
            if (!pos) break;
            std::size_t v = pick_victim();
            plant_single(*pos, v, users[v].mean_amount * p.outlier_multiplier,
                         users[v].home_region, fraud_device++);
        } else if (pattern == Pattern::OffHours) {
            auto pos = find_free_single(&night_positions);
            if (!pos) break;
            std::size_t v = pick_victim();
            plant_single(*pos, v, users[v].mean_amount * p.off_hours_multiplier,
                         users[v].home_region, fraud_device++);
        } else if (pattern == Pattern::GeoJump) {
            auto pos = find_free_single(nullptr);
            if (!pos) break;
            std::size_t v = pick_victim();
            plant_single(*pos, v, users[v].mean_amount * 1.5,
                         farthest_region(users[v].last_region), fraud_device++);
        } else if (pattern == Pattern::MicroBurst) {
            std::size_t len = static_cast<std::size_t>(p.burst_length);
            auto start = find_free_run(len);
            if (!start) {
                auto pos = find_free_single(nullptr);
                if (!pos) break;
                std::size_t v = pick_victim();
                plant_single(*pos, v, users[v].mean_amount * p.outlier_multiplier,
                             users[v].home_region, fraud_device++);
                continue;
            }
            std::size_t v = pick_victim();
            std::uint32_t device = fraud_device++;
            for (std::size_t j = *start; j < *start + len; ++j) {
                double jitter = 0.8 + 0.4 * fraud.next_double();
                plant_single(j, v, users[v].mean_amount * p.burst_amount_frac * jitter,
                             users[v].home_region, device);
            }
        } else { // MultiStepChain
            std::size_t len = static_cast<std::size_t>(
                fraud.next_int(p.chain_min_hops, p.chain_max_hops));
            len = std::min(len, remaining);
            auto start = find_free_run(len);
            if (!start) {
                auto pos = find_free_single(nullptr);
                if (!pos) break;
                std::size_t v = pick_victim();
                plant_single(*pos, v, users[v].mean_amount * p.outlier_multiplier,
                             users[v].home_region, fraud_device++);
                continue;
            }
            std::size_t hop_sender = pick_victim();
            for (std::size_t h = 0; h < len; ++h) {
                std::size_t pos = *start + h;
                std::size_t next = pick_victim();
                if (next == hop_sender && spec.n_users > 1) {
                    next = (next == spec.n_users - 1) ? first_dormant : next + 1;
                }
                plant_single(pos, hop_sender, users[hop_sender].mean_amount * p.chain_multiplier,
                             farthest_region(users[hop_sender].last_region), fraud_device++);
                if (h + 1 < len) {
                    txs[pos].receiver = users[next].account;
                } else {
                    txs[pos].receiver = "mule" + std::to_string(mule_id++);
                }
                hop_sender = next;
            }
        }
    }

    LabeledStream stream;
    stream.spec = spec;
    stream.generator_version = kGeneratorVersion;
    stream.fraud_count = planted;
    stream.txs = std::move(txs);

    // Amount cap suggestion: nearest-rank p99.9 of the legit amounts.
    std::vector<double> legit_amounts;
    legit_amounts.reserve(stream.txs.size());
    for (const Transaction& tx : stream.txs) {
        if (tx.label && *tx.label == 0) legit_amounts.push_back(tx.amount);
    }
    if (!legit_amounts.empty()) {
        std::sort(legit_amounts.begin(), legit_amounts.end());
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(0.999 * static_cast<double>(legit_amounts.size())));
        stream.suggested_amount_cap = legit_amounts[std::min(rank, legit_amounts.size()) - 1];
    } else {
        stream.suggested_amount_cap = FeatureConfig{}.amount_cap;
    }
    return stream;
}

SeparabilityReport check_separability(const LabeledStream& stream,
                                      const FeatureConfig& fcfg,
                                      const SeparabilityThresholds& th) {
    SeparabilityReport report;
    const GenParams& p = stream.spec.params;
    std::unordered_map<std::string, UserProfile> profiles;
    for (const Transaction& raw : stream.txs) {
        UserProfile& profile = profiles[raw.sender];
        if (profile.account.empty()) profile.account = raw.sender;
        Transaction tx = raw;
        BehaviorVector bv = derive_behavior(profile, tx, fcfg);
        tx.behavior = bv;
        if (tx.label && *tx.label == 1) {
            FeatureVector fv = featurize(tx, fcfg);
            bool deviates = std::abs(bv.amount_zscore) >= th.zscore ||
                            bv.tx_rate >= th.tx_rate ||
                            bv.dormancy_gap >= th.dormancy_h ||
                            bv.geo_jump >= 1.0 ||
                            fv[0] >= th.amount_component ||
                            bv.device_consistency <= th.device_consistency ||
                            is_night_fraction(fv[1], p);
            report.checked += 1;
            if (!deviates) {
                if (report.failed == 0) report.first_failed_tx = tx.tx_id;
                report.failed += 1;
            }
        }
        update_profile(profile, tx, fcfg);
    }
    return report;
}

// --- CSV ---------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// Days-from-civil (proleptic Gregorian), for ISO-8601 timestamps.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    std::int64_t yoe = y - era * 400;
    std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

bool parse_iso8601_ms(const std::string& s, std::int64_t& out) {
    int y, mo, d, h, mi, sec;
    int ms = 0;
    if (s.size() < 19) return false;
    char sep = s[10];
    if (sep != 'T' && sep != ' ') return false;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d", &y, &mo, &d) != 3) return false;
    if (std::sscanf(s.c_str() + 11, "%2d:%2d:%2d", &h, &mi, &sec) != 3) return false;
    std::size_t rest = 19;
    if (rest < s.size() && s[rest] == '.') {
        std::size_t end = rest + 1;
        int frac = 0, digits = 0;
        while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) {
            if (digits < 3) frac = frac * 10 + (s[end] - '0');
            ++digits;
            ++end;
        }
        while (digits < 3) {
            frac *= 10;
            ++digits;
        }
        ms = frac;
        rest = end;
    }
    if (rest < s.size() && s[rest] == 'Z') ++rest;
    if (rest != s.size()) return false;
    std::int64_t days = days_from_civil(y, mo, d);
    out = (((days * 24 + h) * 60 + mi) * 60 + sec) * 1000 + ms;
    return true;
}

bool parse_timestamp(const std::string& s, std::int64_t& out) {
    if (parse_i64(s, out)) return true;
    return parse_iso8601_ms(s, out);
}

} // namespace

LabeledStream load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty CSV: missing header row", 1);
    std::vector<std::string> header = split_csv_line(line);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    auto mandatory = [&](const std::string& name) -> std::size_t {
        auto idx = column(name);
        if (!idx) throw SchemaError("missing mandatory column '" + name + "'", 1);
        return *idx;
    };

    std::size_t c_amount = mandatory(schema.amount);
    std::size_t c_ts = mandatory(schema.timestamp);
    std::size_t c_sender = mandatory(schema.sender);
    std::size_t c_receiver = mandatory(schema.receiver);
    std::optional<std::size_t> c_txid = schema.tx_id ? column(*schema.tx_id) : std::nullopt;
    std::optional<std::size_t> c_geo = schema.geo ? column(*schema.geo) : std::nullopt;
    std::optional<std::size_t> c_device = schema.device ? column(*schema.device) : std::nullopt;
    std::optional<std::size_t> c_label = schema.label ? column(*schema.label) : std::nullopt;

    LabeledStream stream;
    stream.spec.name = "csv:" + path;
    stream.generator_version = "csv-import";

    std::size_t line_no = 1;
    std::uint64_t row_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++row_no;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw SchemaError("expected " + std::to_string(header.size()) +
                                  " fields, found " + std::to_string(fields.size()),
                              line_no);
        }
        Transaction tx;
        char* endp = nullptr;
        const std::string& amount_s = fields[c_amount];
        tx.amount = std::strtod(amount_s.c_str(), &endp);
        if (amount_s.empty() || endp != amount_s.c_str() + amount_s.size() ||
            !std::isfinite(tx.amount) || tx.amount < 0.0) {
            throw SchemaError("unparseable amount '" + amount_s + "'", line_no);
        }
        if (!parse_timestamp(fields[c_ts], tx.timestamp)) {
            throw SchemaError("unparseable timestamp '" + fields[c_ts] + "'", line_no);
        }
        tx.sender = fields[c_sender];
        tx.receiver = fields[c_receiver];
        if (tx.sender.empty() || tx.receiver.empty()) {
            throw SchemaError("sender/receiver must be non-empty", line_no);
        }
        if (tx.sender == tx.receiver) {
            throw SchemaError("sender equals receiver", line_no);
        }
        if (c_txid && !fields[*c_txid].empty()) {
            if (!parse_u64(fields[*c_txid], tx.tx_id)) {
                throw SchemaError("unparseable tx_id '" + fields[*c_txid] + "'", line_no);
            }
        } else {
            tx.tx_id = row_no;
        }
        if (c_geo && !fields[*c_geo].empty()) {
            std::uint64_t region;
            if (!parse_u64(fields[*c_geo], region)) {
                throw SchemaError("unparseable geo '" + fields[*c_geo] + "'", line_no);
            }
            tx.geo.region = static_cast<std::uint32_t>(region);
        }
        if (c_device && !fields[*c_device].empty()) {
            std::uint64_t device;
            if (!parse_u64(fields[*c_device], device)) {
                throw SchemaError("unparseable device '" + fields[*c_device] + "'", line_no);
            }
            tx.device = static_cast<std::uint32_t>(device);
        }
        if (c_label && !fields[*c_label].empty()) {
            const std::string& l = fields[*c_label];
            if (l == "0") {
                tx.label = 0;
            } else if (l == "1") {
                tx.label = 1;
            } else {
                throw SchemaError("label must be 0 or 1, got '" + l + "'", line_no);
            }
        }
        stream.txs.push_back(std::move(tx));
    }

    std::stable_sort(stream.txs.begin(), stream.txs.end(),
                     [](const Transaction& a, const Transaction& b) {
                         return a.timestamp != b.timestamp ? a.timestamp < b.timestamp
                                                           : a.tx_id < b.tx_id;
                     });

    std::vector<double> amounts;
    for (const Transaction& tx : stream.txs) {
        if (!tx.label || *tx.label == 0) amounts.push_back(tx.amount);
    }
    if (!amounts.empty()) {
        std::sort(amounts.begin(), amounts.end());
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(0.999 * static_cast<double>(amounts.size())));
        stream.suggested_amount_cap = amounts[std::min(rank, amounts.size()) - 1];
    } else {
        stream.suggested_amount_cap = FeatureConfig{}.amount_cap;
    }
    stream.spec.n_tx = stream.txs.size();
    return stream;
}

void write_csv(const LabeledStream& stream, std::ostream& out) {
    out << "tx_id,sender,receiver,amount,timestamp,geo,device,label\n";
    char amount_buf[64];
    for (const Transaction& tx : stream.txs) {
        std::snprintf(amount_buf, sizeof(amount_buf), "%.17g", tx.amount);
        out << tx.tx_id << ',' << tx.sender << ',' << tx.receiver << ',' << amount_buf
            << ',' << tx.timestamp << ',' << tx.geo.region << ',' << tx.device << ',';
        if (tx.label) out << *tx.label;
        out << '\n';
    }
}

void write_csv_file(const LabeledStream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_csv(stream, out);
}

std::string stream_fingerprint(const LabeledStream& stream) {
    ByteWriter w;
    w.u64(stream.txs.size());
    for (const Transaction& tx : stream.txs) {
        write_tx(w, tx);
        w.u8(tx.label ? static_cast<std::uint8_t>(*tx.label) : 0xff);
    }
    return to_hex(sha256(w.bytes()));
}

} // namespace riskchain
