#pragma once

#include "riskchain/bytes.hpp"
#include "riskchain/crypto.hpp"
#include "riskchain/tx.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riskchain {

/// Committed payload: the transaction, its unified risk score at assessment
/// time, and the assessment timestamp. Ground-truth labels are evaluation
/// data, not observations, and are never committed.
struct BlockEntry {
    Transaction tx;
    double risk = 0.0;
    std::int64_t assessed_at = 0;
};

struct BlockSignature {
    std::string validator;
    Hash256 signature{};
};

struct Block {
    std::uint64_t index = 0;
    std::int64_t created_at = 0;
    Hash256 prev_hash{};
    std::vector<BlockEntry> entries;
    Hash256 hash{};
    std::vector<BlockSignature> signatures;
};

/// Canonical body bytes: index, created_at, prev_hash, entry count, then each
/// entry's fields in declared order. Hash and signatures are derived data and
/// are not part of the body.
std::vector<std::uint8_t> serialize_block(const Block& block);

/// Canonical transaction encoding shared by block bodies, the incident log,
/// and dataset fingerprints. Labels are excluded.
void write_tx(ByteWriter& w, const Transaction& tx);

/// SHA-256 over serialize_block(block) concatenated with prev_hash.
Hash256 compute_block_hash(const Block& block);

/// Simulated validator signature over a block hash.
Hash256 sign_block(const Hash256& validator_secret, const Hash256& block_hash);

/// Derives a validator's signing secret from its id. Simulation-only: the
/// derivation is public so exported ledgers stay self-verifiable; a real
/// deployment would plug an actual signature scheme in behind sign_block.
Hash256 validator_secret(const std::string& validator_id);

/// The registered committee an appended block must be signed by.
struct ValidatorSet {
    std::vector<std::string> ids;
    std::size_t min_signatures = 0;

    static ValidatorSet simulated(std::size_t n, std::size_t min_signatures);
    bool contains(const std::string& id) const;
};

struct VerifyResult {
    bool ok = true;
    std::uint64_t first_invalid = 0;
    std::string reason;
};

Block make_genesis_block();

/// Append-only hash-chained ledger, bootstrapped with the genesis block.
class Ledger {
public:
    Ledger() : Ledger(ValidatorSet{}) {}
    explicit Ledger(ValidatorSet validators);

    /// Link, index, hash, and signature checks; ChainError / AuthorizationError
    /// on violation, leaving the ledger unchanged.
    void append(Block block);

    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& tip() const { return blocks_.back(); }
    std::size_t size() const { return blocks_.size(); }
    const ValidatorSet& validators() const { return validators_; }

    VerifyResult verify() const;

private:
    std::vector<Block> blocks_;
    ValidatorSet validators_;
};

class ChainError : public DomainError {
public:
    using DomainError::DomainError;
};

class AuthorizationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Full-chain recheck over an arbitrary block sequence: recomputes every
/// hash, link, and signature set; returns the smallest failing index.
VerifyResult verify_chain(const std::vector<Block>& blocks, const ValidatorSet& validators);

/// JSON Lines export: one header object, then one object per block, hashes
/// and signatures hex-encoded lowercase.
void export_ledger(const Ledger& ledger, std::ostream& out);
void export_ledger_file(const Ledger& ledger, const std::string& path);

struct LoadedLedger {
    std::vector<Block> blocks;
    ValidatorSet validators;
};

/// Parses and structurally validates an export; SchemaError with the line
/// number on malformed input. Chain integrity is checked via verify_chain.
LoadedLedger import_ledger(std::istream& in);
LoadedLedger import_ledger_file(const std::string& path);

} // namespace riskchain
