#pragma once

#include "riskchain/crypto.hpp"
#include "riskchain/ledger.hpp"
#include "riskchain/rng.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

namespace riskchain {

/// Discrete-event virtual clock. Events run in (time, insertion sequence)
/// order, so processing is deterministic for a fixed schedule; time never
/// decreases.
class SimClock {
public:
    std::int64_t now() const { return now_; }

    void advance_to(std::int64_t t);
    void schedule_at(std::int64_t t, std::function<void()> fn);
    void schedule_in(std::int64_t delay, std::function<void()> fn);

    /// Pops the earliest event, advances the clock to it, and runs it.
    bool step();
    void run_until_idle();
    bool idle() const { return queue_.empty(); }

private:
    struct Scheduled {
        std::int64_t t;
        std::uint64_t seq;
        std::function<void()> fn;
        bool operator>(const Scheduled& o) const {
            return t != o.t ? t > o.t : seq > o.seq;
        }
    };

    std::int64_t now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> queue_;
};

enum class FaultMode { Honest, AlwaysReject, RandomVote };

const char* to_string(FaultMode m);

struct ValidatorNode {
    std::string id;
    Hash256 secret{};
    FaultMode fault = FaultMode::Honest;
};

/// Network and committee parameters (defaults per the simulated 5-node
/// committee: 10-50 ms links, 10-30 ms validation, 3-of-5 approval).
struct NetworkConfig {
    std::size_t n_nodes = 5;
    std::size_t theta = 3;
    std::int64_t link_min_ms = 10;
    std::int64_t link_max_ms = 50;
    std::int64_t validation_min_ms = 10;
    std::int64_t validation_max_ms = 30;

    void validate() const;
};

/// What an honest validator checks a proposed block against.
struct BlockRules {
    Hash256 expected_prev_hash{};
    double reject_threshold = 0.7; ///< eta2: no committed tx may carry risk >= this
    std::size_t max_entries = 100;
};

/// Structured entry of the network event log (exported as JSON Lines).
struct NetEvent {
    std::int64_t t = 0;
    std::string type; ///< propose | vote | commit | discard | broadcast | receive
    std::uint64_t block_index = 0;
    std::string node;
    int vote = -1;           ///< 0/1 for vote events
    std::int64_t value = -1; ///< approvals for commit/discard, delay for receive
};

using EventLog = std::vector<NetEvent>;

struct VoteRecord {
    std::uint64_t block_index = 0;
    std::vector<std::pair<std::string, bool>> votes; ///< in vote-arrival order
    std::size_t approvals = 0;
    bool verdict = false;
};

struct ConsensusResult {
    VoteRecord record;
    std::int64_t proposed_at = 0;
    std::int64_t committed_at = 0; ///< arrival of the last vote
    std::vector<BlockSignature> signatures; ///< from approving honest nodes
};

struct BroadcastResult {
    std::int64_t broadcast_at = 0;
    std::vector<std::pair<std::string, std::int64_t>> receive_times;
    std::int64_t propagation_delay = 0; ///< D_b = max receive - broadcast
};

/// Simulated permissioned validator network over a shared virtual clock.
/// All latency draws come from one seeded stream in a fixed order (per node:
/// outbound link, validation, return link, then the vote draw for
/// random-vote nodes), so runs are replayable.
class NetworkModel {
public:
    NetworkModel(NetworkConfig cfg, std::uint64_t seed);

    /// Round-robin PoA rotation: node[round mod N].
    const ValidatorNode& select_leader(std::uint64_t round) const;

    /// A single node's validation decision; honest nodes recheck the hash,
    /// the link to the expected tip, every entry's recorded risk, and the
    /// block size. Faulty nodes answer per their fault mode.
    bool validate(const ValidatorNode& node, const Block& block, const BlockRules& rules);

    /// Full theta-of-N round: every node receives the proposal, validates,
    /// and returns its vote over sampled link latencies; the round closes
    /// when the last vote arrives. Approving honest nodes sign the block.
    ConsensusResult run_consensus(const Block& block, const BlockRules& rules,
                                  SimClock& clock, EventLog& log);

    /// Post-commit propagation of a committed block to all nodes; does not
    /// advance the caller's clock (the next round may start at commit time).
    BroadcastResult broadcast(const Block& block, SimClock& clock, EventLog& log);

    const std::vector<ValidatorNode>& nodes() const { return nodes_; }
    std::vector<ValidatorNode>& nodes() { return nodes_; }
    const NetworkConfig& config() const { return cfg_; }

private:
    std::int64_t sample_link();
    std::int64_t sample_validation();

    NetworkConfig cfg_;
    std::vector<ValidatorNode> nodes_;
    Rng rng_;
};

/// Threshold verdict on an explicit vote multiset; order-independent.
bool consensus_verdict(const std::vector<bool>& votes, std::size_t theta);

} // namespace riskchain
