#include "riskchain/pipeline.hpp"

#include "riskchain/bytes.hpp"
#include "riskchain/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace riskchain {

using nlohmann::json;

void PipelineConfig::validate() const {
    if (block_size < 1) throw ConfigError("block_size must be at least 1");
    if (!allow_unbounded_block_size && (block_size < 50 || block_size > 100)) {
        throw ConfigError("block_size outside [50,100]; set the explicit override to lift");
    }
    if (block_interval_ms <= 0) throw ConfigError("block_interval_ms must be positive");
    if (edge_cost_ms < 0 || ai_cost_ms < 0) {
        throw ConfigError("processing costs must be non-negative");
    }
    if (warm_epochs < 1) throw ConfigError("warm_epochs must be at least 1");
}

namespace {

std::vector<std::uint8_t> incident_bytes(const IncidentRecord& r) {
    ByteWriter w;
    write_tx(w, r.tx);
    w.f64(r.assessment.r_ml);
    w.f64(r.assessment.r_f);
    w.f64(r.assessment.r);
    w.u8(static_cast<std::uint8_t>(r.assessment.decision));
    w.u32(static_cast<std::uint32_t>(r.assessment.trace.size()));
    for (const RuleTrace& t : r.assessment.trace) {
        w.f64(t.firing_strength);
        w.f64(t.weight);
    }
    return w.take();
}

} // namespace

Hash256 IncidentLog::record_hash(const IncidentRecord& record) {
    ByteWriter w;
    w.raw(incident_bytes(record));
    w.raw(record.prev_hash);
    return sha256(w.bytes());
}

void IncidentLog::append(Transaction tx, RiskAssessment assessment) {
    IncidentRecord record;
    record.tx = std::move(tx);
    record.assessment = std::move(assessment);
    record.prev_hash = tip_;
    record.hash = record_hash(record);
    tip_ = record.hash;
    records_.push_back(std::move(record));
}

VerifyResult IncidentLog::verify() const {
    Hash256 prev = kZeroHash;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const IncidentRecord& r = records_[i];
        if (r.prev_hash != prev) return {false, i, "incident prev_hash mismatch"};
        if (record_hash(r) != r.hash) return {false, i, "incident hash mismatch"};
        prev = r.hash;
    }
    return {};
}

void export_incidents(const IncidentLog& log, std::ostream& out) {
    json header{{"schema_version", 1}, {"kind", "incidents"}, {"count", log.size()}};
    out << header.dump() << '\n';
    for (const IncidentRecord& r : log.records()) {
        json trace = json::array();
        for (const RuleTrace& t : r.assessment.trace) {
            trace.push_back({t.firing_strength, t.weight});
        }
        json j{{"tx_id", r.tx.tx_id},
               {"sender", r.tx.sender},
               {"receiver", r.tx.receiver},
               {"amount", r.tx.amount},
               {"timestamp", r.tx.timestamp},
               {"geo", r.tx.geo.region},
               {"device", r.tx.device},
               {"r_ml", r.assessment.r_ml},
               {"r_f", r.assessment.r_f},
               {"r", r.assessment.r},
               {"decision", to_string(r.assessment.decision)},
               {"trace", trace},
               {"prev_hash", to_hex(r.prev_hash)},
               {"hash", to_hex(r.hash)}};
        out << j.dump() << '\n';
    }
}

void export_incidents_file(const IncidentLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    export_incidents(log, out);
}

Pipeline::Pipeline(PipelineConfig cfg, FeatureConfig fcfg, RiskEngine engine,
                   NetworkModel network)
    : cfg_(cfg), fcfg_(fcfg), engine_(std::move(engine)), network_(std::move(network)) {
    cfg_.validate();
}

UserProfile& Pipeline::profile_for(const std::string& account) {
    UserProfile& profile = profiles_[account];
    if (profile.account.empty()) profile.account = account;
    return profile;
}

void Pipeline::warm_start(std::span<const Transaction> prefix) {
    if (prefix.empty()) return;
    std::vector<std::pair<FeatureVector, int>> training;
    training.reserve(prefix.size());
    for (const Transaction& raw : prefix) {
        UserProfile& profile = profile_for(raw.sender);
        Transaction tx = raw;
        tx.behavior = derive_behavior(profile, tx, fcfg_);
        if (tx.label) {
            training.emplace_back(featurize(tx, fcfg_), *tx.label);
        }
        update_profile(profile, tx, fcfg_);
    }
    for (int epoch = 0; epoch < cfg_.warm_epochs; ++epoch) {
        for (const auto& [fv, label] : training) engine_.learn(fv, label);
    }
}

void Pipeline::propose_round(RunArtifacts& artifacts) {
    if (mempool_.empty()) return;

    Block block;
    block.index = artifacts.ledger.tip().index + 1;
    block.created_at = clock_.now();
    block.prev_hash = artifacts.ledger.tip().hash;
    std::size_t take = std::min(cfg_.block_size, mempool_.size());
    std::vector<MempoolEntry> batch(mempool_.begin(), mempool_.begin() + take);
    mempool_.erase(mempool_.begin(), mempool_.begin() + take);
    for (const MempoolEntry& e : batch) {
        block.entries.push_back({e.tx, e.risk, e.assessed_at});
    }
    block.hash = compute_block_hash(block);

    BlockRules rules{block.prev_hash, engine_.fusion().eta2, cfg_.block_size};
    ConsensusResult result = network_.run_consensus(block, rules, clock_, artifacts.events);

    bool committed = false;
    if (result.record.verdict) {
        block.signatures = result.signatures;
        try {
            artifacts.ledger.append(block);
            committed = true;
        } catch (const AuthorizationError&) {
            // Verdict reached through non-signing (faulty) approvers; handled
            // like a failed round.
        }
    }

    if (committed) {
        for (const MempoolEntry& e : batch) {
            auto it = lifecycle_index_.find(e.tx.tx_id);
            if (it != lifecycle_index_.end()) {
                artifacts.lifecycles[it->second].t_confirmed = result.committed_at;
            }
        }
        artifacts.broadcasts.push_back(network_.broadcast(block, clock_, artifacts.events));
    } else {
        // Discard and requeue at the front, preserving order; transactions
        // that exhausted their retries go to the terminal failure list.
        for (auto it = batch.rbegin(); it != batch.rend(); ++it) {
            MempoolEntry e = *it;
            e.retries += 1;
            if (e.retries > cfg_.max_block_retries) {
                auto lc = lifecycle_index_.find(e.tx.tx_id);
                if (lc != lifecycle_index_.end()) {
                    artifacts.lifecycles[lc->second].terminal_failed = true;
                }
                artifacts.failed_tx_ids.push_back(e.tx.tx_id);
            } else {
                mempool_.push_front(std::move(e));
            }
        }
    }

    if (mempool_.empty()) {
        mempool_deadline_.reset();
    } else {
        mempool_deadline_ = clock_.now() + cfg_.block_interval_ms;
    }
}

RunArtifacts Pipeline::run(std::span<const Transaction> live) {
    RunArtifacts artifacts{Ledger(ValidatorSet::simulated(network_.config().n_nodes,
                                                          network_.config().theta)),
                           {}, {}, {}, {}, {}, 0, 0};
    artifacts.lifecycles.reserve(live.size());

    for (const Transaction& raw : live) {
        // Deadline-triggered proposals that fall before this arrival.
        while (!mempool_.empty() && mempool_deadline_ &&
               *mempool_deadline_ <= std::max(raw.timestamp, clock_.now())) {
            clock_.advance_to(*mempool_deadline_);
            propose_round(artifacts);
        }

        clock_.advance_to(raw.timestamp);
        std::int64_t assessed_at = clock_.now() + cfg_.edge_cost_ms + cfg_.ai_cost_ms;
        clock_.advance_to(assessed_at);

        UserProfile& profile = profile_for(raw.sender);
        Transaction tx = raw;
        tx.behavior = derive_behavior(profile, tx, fcfg_);
        FeatureVector fv = featurize(tx, fcfg_);
        RiskAssessment assessment = engine_.assess_features(tx.tx_id, fv);

        TxLifecycle lc;
        lc.tx_id = tx.tx_id;
        lc.t_submitted = raw.timestamp;
        lc.t_assessed = assessed_at;
        lc.decision = assessment.decision;
        lc.r_ml = assessment.r_ml;
        lc.r_f = assessment.r_f;
        lc.r = assessment.r;
        lc.label = tx.label;
        lifecycle_index_[tx.tx_id] = artifacts.lifecycles.size();
        artifacts.lifecycles.push_back(lc);
        artifacts.processed_count += 1;

        if (assessment.decision == Decision::Reject) {
            artifacts.events.push_back({clock_.now(), "incident",
                                        artifacts.ledger.tip().index + 1, tx.sender, -1,
                                        -1});
            artifacts.incidents.append(tx, assessment);
        } else {
            bool was_empty = mempool_.empty();
            mempool_.push_back({tx, assessment.r, assessed_at, 0});
            if (was_empty) mempool_deadline_ = assessed_at + cfg_.block_interval_ms;
            if (mempool_.size() >= cfg_.block_size) propose_round(artifacts);
        }

        if (cfg_.online_learning && tx.label) {
            engine_.learn(fv, *tx.label);
        }
        update_profile(profile, tx, fcfg_);
    }

    while (!mempool_.empty()) propose_round(artifacts);

    artifacts.final_virtual_time = clock_.now();
    return artifacts;
}

RunArtifacts process_stream(const LabeledStream& stream, const PipelineConfig& cfg,
                            const FeatureConfig& fcfg, RiskEngine engine,
                            NetworkModel network, double warm_fraction,
                            RiskEngine* final_engine) {
    if (warm_fraction < 0.0 || warm_fraction >= 1.0) {
        throw ConfigError("warm_fraction must lie in [0,1)");
    }
    Pipeline pipeline(cfg, fcfg, std::move(engine), std::move(network));
    std::size_t prefix = static_cast<std::size_t>(
        warm_fraction * static_cast<double>(stream.txs.size()));
    std::span<const Transaction> all(stream.txs);
    pipeline.warm_start(all.subspan(0, prefix));
    RunArtifacts artifacts = pipeline.run(all.subspan(prefix));
    if (final_engine) *final_engine = pipeline.engine();
    return artifacts;
}

} // namespace riskchain
