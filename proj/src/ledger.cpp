#include "riskchain/ledger.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace riskchain {

using nlohmann::json;

namespace {
constexpr int kLedgerSchemaVersion = 1;
}

void write_tx(ByteWriter& w, const Transaction& tx) {
    w.u64(tx.tx_id);
    w.str(tx.sender);
    w.str(tx.receiver);
    w.f64(tx.amount);
    w.i64(tx.timestamp);
    w.u32(tx.geo.region);
    w.u8(tx.geo.coords ? 1 : 0);
    if (tx.geo.coords) {
        w.f64(tx.geo.coords->lat);
        w.f64(tx.geo.coords->lon);
    }
    w.u32(tx.device);
    w.u8(tx.behavior ? 1 : 0);
    if (tx.behavior) {
        w.f64(tx.behavior->tx_rate);
        w.f64(tx.behavior->amount_zscore);
        w.f64(tx.behavior->device_consistency);
        w.f64(tx.behavior->geo_jump);
        w.f64(tx.behavior->dormancy_gap);
    }
}

std::vector<std::uint8_t> serialize_block(const Block& block) {
    ByteWriter w;
    w.u64(block.index);
    w.i64(block.created_at);
    w.raw(block.prev_hash);
    w.u32(static_cast<std::uint32_t>(block.entries.size()));
    for (const BlockEntry& e : block.entries) {
        write_tx(w, e.tx);
        w.f64(e.risk);
        w.i64(e.assessed_at);
    }
    return w.take();
}

Hash256 compute_block_hash(const Block& block) {
    ByteWriter w;
    w.raw(serialize_block(block));
    w.raw(block.prev_hash);
    return sha256(w.bytes());
}

Hash256 sign_block(const Hash256& validator_secret, const Hash256& block_hash) {
    return keyed_digest(validator_secret, block_hash);
}

Hash256 validator_secret(const std::string& validator_id) {
    return sha256("riskchain-validator:" + validator_id);
}

ValidatorSet ValidatorSet::simulated(std::size_t n, std::size_t min_signatures) {
    ValidatorSet set;
    set.min_signatures = min_signatures;
    for (std::size_t i = 0; i < n; ++i) set.ids.push_back("v" + std::to_string(i));
    return set;
}

bool ValidatorSet::contains(const std::string& id) const {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Block make_genesis_block() {
    Block genesis;
    genesis.index = 0;
    genesis.created_at = 0;
    genesis.prev_hash = kZeroHash;
    genesis.hash = compute_block_hash(genesis);
    return genesis;
}

Ledger::Ledger(ValidatorSet validators) : validators_(std::move(validators)) {
    blocks_.push_back(make_genesis_block());
}

namespace {

std::size_t count_valid_signatures(const Block& block, const ValidatorSet& validators) {
    std::size_t valid = 0;
    for (const BlockSignature& sig : block.signatures) {
        if (!validators.contains(sig.validator)) continue;
        if (sign_block(validator_secret(sig.validator), block.hash) == sig.signature) {
            valid += 1;
        }
    }
    return valid;
}

} // namespace

void Ledger::append(Block block) {
    const Block& tip_block = tip();
    if (block.prev_hash != tip_block.hash) {
        throw ChainError("block " + std::to_string(block.index) +
                         " does not link to the chain tip");
    }
    if (block.index != tip_block.index + 1) {
        throw ChainError("expected block index " + std::to_string(tip_block.index + 1) +
                         ", got " + std::to_string(block.index));
    }
    if (block.hash != compute_block_hash(block)) {
        throw ChainError("block " + std::to_string(block.index) +
                         " hash does not match its contents");
    }
    if (count_valid_signatures(block, validators_) < validators_.min_signatures) {
        throw AuthorizationError("block " + std::to_string(block.index) +
                                 " lacks the required validator signatures");
    }
    blocks_.push_back(std::move(block));
}

VerifyResult Ledger::verify() const { return verify_chain(blocks_, validators_); }

VerifyResult verify_chain(const std::vector<Block>& blocks, const ValidatorSet& validators) {
    auto fail = [](std::uint64_t index, std::string reason) {
        return VerifyResult{false, index, std::move(reason)};
    };
    if (blocks.empty()) return fail(0, "empty chain: missing genesis block");

    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.index != i) return fail(i, "non-contiguous block index");
        if (i == 0) {
            if (b.prev_hash != kZeroHash) return fail(0, "genesis prev_hash is not zero");
        } else if (b.prev_hash != blocks[i - 1].hash) {
            return fail(i, "prev_hash does not match the previous block");
        }
        Hash256 recomputed;
        try {
            recomputed = compute_block_hash(b);
        } catch (const DomainError&) {
            return fail(i, "block is not serializable");
        }
        if (recomputed != b.hash) return fail(i, "stored hash does not match contents");
        if (i > 0 && count_valid_signatures(b, validators) < validators.min_signatures) {
            return fail(i, "insufficient valid validator signatures");
        }
    }
    return {};
}

namespace {

json geo_to_json(const Geo& geo) {
    json j{{"region", geo.region}};
    if (geo.coords) {
        j["lat"] = geo.coords->lat;
        j["lon"] = geo.coords->lon;
    }
    return j;
}

Geo geo_from_json(const json& j) {
    Geo geo;
    geo.region = j.at("region").get<std::uint32_t>();
    if (j.contains("lat")) {
        geo.coords = GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
    }
    return geo;
}

json entry_to_json(const BlockEntry& e) {
    json j{{"tx_id", e.tx.tx_id},
           {"sender", e.tx.sender},
           {"receiver", e.tx.receiver},
           {"amount", e.tx.amount},
           {"timestamp", e.tx.timestamp},
           {"geo", geo_to_json(e.tx.geo)},
           {"device", e.tx.device},
           {"risk", e.risk},
           {"assessed_at", e.assessed_at}};
    if (e.tx.behavior) {
        const BehaviorVector& bv = *e.tx.behavior;
        j["behavior"] = {{"tx_rate", bv.tx_rate},
                         {"amount_zscore", bv.amount_zscore},
                         {"device_consistency", bv.device_consistency},
                         {"geo_jump", bv.geo_jump},
                         {"dormancy_gap", bv.dormancy_gap}};
    }
    return j;
}

BlockEntry entry_from_json(const json& j) {
    BlockEntry e;
    e.tx.tx_id = j.at("tx_id").get<std::uint64_t>();
    e.tx.sender = j.at("sender").get<std::string>();
    e.tx.receiver = j.at("receiver").get<std::string>();
    e.tx.amount = j.at("amount").get<double>();
    e.tx.timestamp = j.at("timestamp").get<std::int64_t>();
    e.tx.geo = geo_from_json(j.at("geo"));
    e.tx.device = j.at("device").get<std::uint32_t>();
    if (j.contains("behavior")) {
        const json& b = j.at("behavior");
        e.tx.behavior = BehaviorVector{b.at("tx_rate").get<double>(),
                                       b.at("amount_zscore").get<double>(),
                                       b.at("device_consistency").get<double>(),
                                       b.at("geo_jump").get<double>(),
                                       b.at("dormancy_gap").get<double>()};
    }
    e.risk = j.at("risk").get<double>();
    e.assessed_at = j.at("assessed_at").get<std::int64_t>();
    return e;
}

json block_to_json(const Block& b) {
    json sigs = json::array();
    for (const BlockSignature& s : b.signatures) {
        sigs.push_back({{"validator", s.validator}, {"signature", to_hex(s.signature)}});
    }
    json entries = json::array();
    for (const BlockEntry& e : b.entries) entries.push_back(entry_to_json(e));
    return {{"index", b.index},
            {"created_at", b.created_at},
            {"prev_hash", to_hex(b.prev_hash)},
            {"hash", to_hex(b.hash)},
            {"signatures", sigs},
            {"entries", entries}};
}

Block block_from_json(const json& j) {
    Block b;
    b.index = j.at("index").get<std::uint64_t>();
    b.created_at = j.at("created_at").get<std::int64_t>();
    b.prev_hash = hash_from_hex(j.at("prev_hash").get<std::string>());
    b.hash = hash_from_hex(j.at("hash").get<std::string>());
    for (const json& s : j.at("signatures")) {
        b.signatures.push_back({s.at("validator").get<std::string>(),
                                hash_from_hex(s.at("signature").get<std::string>())});
    }
    for (const json& e : j.at("entries")) b.entries.push_back(entry_from_json(e));
    return b;
}

} // namespace

void export_ledger(const Ledger& ledger, std::ostream& out) {
    json header{{"schema_version", kLedgerSchemaVersion},
                {"kind", "ledger"},
                {"min_signatures", ledger.validators().min_signatures},
                {"validators", ledger.validators().ids}};
    out << header.dump() << '\n';
    for (const Block& b : ledger.blocks()) out << block_to_json(b).dump() << '\n';
}

void export_ledger_file(const Ledger& ledger, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    export_ledger(ledger, out);
}

LoadedLedger import_ledger(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    LoadedLedger loaded;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("ledger parse error: ") + e.what(), line_no);
        }
        try {
            if (!have_header) {
                if (j.value("kind", "") != "ledger" ||
                    j.value("schema_version", 0) != kLedgerSchemaVersion) {
                    throw SchemaError("missing or unsupported ledger header", line_no);
                }
                loaded.validators.min_signatures = j.at("min_signatures").get<std::size_t>();
                loaded.validators.ids = j.at("validators").get<std::vector<std::string>>();
                have_header = true;
            } else {
                loaded.blocks.push_back(block_from_json(j));
            }
        } catch (const json::exception& e) {
            throw SchemaError(std::string("ledger field error: ") + e.what(), line_no);
        }
    }
    if (!have_header) throw SchemaError("empty ledger file: no header line");
    return loaded;
}

LoadedLedger import_ledger_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return import_ledger(in);
}

} // namespace riskchain
