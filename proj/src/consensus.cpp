#include "riskchain/consensus.hpp"

#include "riskchain/errors.hpp"

#include <algorithm>

namespace riskchain {

void SimClock::advance_to(std::int64_t t) {
    if (t > now_) now_ = t;
}

void SimClock::schedule_at(std::int64_t t, std::function<void()> fn) {
    if (t < now_) throw DomainError("cannot schedule an event in the past");
    queue_.push({t, next_seq_++, std::move(fn)});
}

void SimClock::schedule_in(std::int64_t delay, std::function<void()> fn) {
    schedule_at(now_ + delay, std::move(fn));
}

bool SimClock::step() {
    if (queue_.empty()) return false;
    Scheduled ev = queue_.top();
    queue_.pop();
    now_ = ev.t;
    ev.fn();
    return true;
}

void SimClock::run_until_idle() {
    while (step()) {
    }
}

const char* to_string(FaultMode m) {
    switch (m) {
    case FaultMode::Honest: return "honest";
    case FaultMode::AlwaysReject: return "always_reject";
    case FaultMode::RandomVote: return "random_vote";
    }
    return "?";
}

void NetworkConfig::validate() const {
    if (n_nodes == 0) throw ConfigError("network needs at least one node");
    if (theta < 1 || theta > n_nodes) {
        throw ConfigError("theta must satisfy 1 <= theta <= n_nodes");
    }
    if (link_min_ms <= 0 || link_min_ms > link_max_ms) {
        throw ConfigError("link latency bounds must satisfy 0 < min <= max");
    }
    if (validation_min_ms <= 0 || validation_min_ms > validation_max_ms) {
        throw ConfigError("validation latency bounds must satisfy 0 < min <= max");
    }
}

NetworkModel::NetworkModel(NetworkConfig cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(seed) {
    cfg_.validate();
    for (std::size_t i = 0; i < cfg_.n_nodes; ++i) {
        std::string id = "v" + std::to_string(i);
        nodes_.push_back({id, validator_secret(id), FaultMode::Honest});
    }
}

const ValidatorNode& NetworkModel::select_leader(std::uint64_t round) const {
    return nodes_[round % nodes_.size()];
}

std::int64_t NetworkModel::sample_link() {
    return rng_.next_int(cfg_.link_min_ms, cfg_.link_max_ms);
}

std::int64_t NetworkModel::sample_validation() {
    return rng_.next_int(cfg_.validation_min_ms, cfg_.validation_max_ms);
}

bool NetworkModel::validate(const ValidatorNode& node, const Block& block,
                            const BlockRules& rules) {
    switch (node.fault) {
    case FaultMode::AlwaysReject:
        return false;
    case FaultMode::RandomVote:
        return rng_.next_bool();
    case FaultMode::Honest:
        break;
    }
    if (block.hash != compute_block_hash(block)) return false;
    if (block.prev_hash != rules.expected_prev_hash) return false;
    if (block.entries.empty() || block.entries.size() > rules.max_entries) return false;
    for (const BlockEntry& e : block.entries) {
        if (!(e.risk < rules.reject_threshold)) return false;
    }
    return true;
}

bool consensus_verdict(const std::vector<bool>& votes, std::size_t theta) {
    std::size_t approvals = 0;
    for (bool v : votes) approvals += v ? 1 : 0;
    return approvals >= theta;
}

ConsensusResult NetworkModel::run_consensus(const Block& block, const BlockRules& rules,
                                            SimClock& clock, EventLog& log) {
    ConsensusResult result;
    result.proposed_at = clock.now();
    result.record.block_index = block.index;

    const ValidatorNode& leader = select_leader(block.index);
    log.push_back({clock.now(), "propose", block.index, leader.id, -1, -1});

    // All latencies and vote draws are consumed now, in node order, so the
    // event-queue replay below cannot change the stream.
    struct PlannedVote {
        const ValidatorNode* node;
        std::int64_t arrives_at;
        bool vote;
    };
    std::vector<PlannedVote> planned;
    planned.reserve(nodes_.size());
    for (ValidatorNode& node : nodes_) {
        std::int64_t outbound = sample_link();
        std::int64_t validation = sample_validation();
        std::int64_t inbound = sample_link();
        bool vote = validate(node, block, rules);
        planned.push_back(
            {&node, result.proposed_at + outbound + validation + inbound, vote});
    }

    for (const PlannedVote& pv : planned) {
        clock.schedule_at(pv.arrives_at, [this, pv, &block, &result, &log, &clock] {
            log.push_back({clock.now(), "vote", block.index, pv.node->id, pv.vote ? 1 : 0, -1});
            result.record.votes.emplace_back(pv.node->id, pv.vote);
            if (pv.vote) {
                result.record.approvals += 1;
                if (pv.node->fault == FaultMode::Honest) {
                    result.signatures.push_back(
                        {pv.node->id, sign_block(pv.node->secret, block.hash)});
                }
            }
        });
    }
    clock.run_until_idle();

    result.committed_at = clock.now();
    result.record.verdict = result.record.approvals >= cfg_.theta;
    log.push_back({clock.now(), result.record.verdict ? "commit" : "discard",
                   block.index, leader.id, -1,
                   static_cast<std::int64_t>(result.record.approvals)});
    return result;
}

BroadcastResult NetworkModel::broadcast(const Block& block, SimClock& clock,
                                        EventLog& log) {
    BroadcastResult result;
    result.broadcast_at = clock.now();
    log.push_back({clock.now(), "broadcast", block.index, "", -1, -1});

    std::int64_t latest = result.broadcast_at;
    for (const ValidatorNode& node : nodes_) {
        std::int64_t delay = sample_link();
        std::int64_t at = result.broadcast_at + delay;
        result.receive_times.emplace_back(node.id, at);
        log.push_back({at, "receive", block.index, node.id, -1, delay});
        latest = std::max(latest, at);
    }
    result.propagation_delay = latest - result.broadcast_at;
    return result;
}

} // namespace riskchain
