#pragma once

#include "riskchain/consensus.hpp"
#include "riskchain/datagen.hpp"
#include "riskchain/ledger.hpp"
#include "riskchain/risk.hpp"
#include "riskchain/tx.hpp"

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace riskchain {

/// Batching, virtual processing costs, and learning switches.
struct PipelineConfig {
    std::size_t block_size = 50;          ///< max transactions per block
    std::int64_t block_interval_ms = 5000; ///< proposal deadline for a non-empty mempool
    std::size_t max_block_retries = 1;    ///< re-proposals after a discarded block
    std::int64_t edge_cost_ms = 2;        ///< L_edge per transaction
    std::int64_t ai_cost_ms = 5;          ///< L_AI per transaction
    bool online_learning = true;
    int warm_epochs = 3;
    bool allow_unbounded_block_size = false; ///< lifts the 50-100 guard when set

    void validate() const;
};

struct TxLifecycle {
    std::uint64_t tx_id = 0;
    std::int64_t t_submitted = 0;
    std::int64_t t_assessed = 0;
    std::optional<std::int64_t> t_confirmed;
    Decision decision = Decision::Accept;
    double r_ml = 0.0;
    double r_f = 0.0;
    double r = 0.0;
    std::optional<int> label;
    bool terminal_failed = false; ///< dropped after exhausting block retries
};

struct IncidentRecord {
    Transaction tx;
    RiskAssessment assessment;
    Hash256 prev_hash{};
    Hash256 hash{};
};

/// Append-only hash-chained record of rejected transactions, carrying the
/// same tamper-evidence property as the ledger.
class IncidentLog {
public:
    void append(Transaction tx, RiskAssessment assessment);
    const std::vector<IncidentRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    VerifyResult verify() const;

    static Hash256 record_hash(const IncidentRecord& record);

private:
    std::vector<IncidentRecord> records_;
    Hash256 tip_ = kZeroHash;
};

void export_incidents(const IncidentLog& log, std::ostream& out);
void export_incidents_file(const IncidentLog& log, const std::string& path);

struct RunArtifacts {
    Ledger ledger;
    IncidentLog incidents;
    std::vector<TxLifecycle> lifecycles;
    EventLog events;
    std::vector<BroadcastResult> broadcasts; ///< one per committed block, in order
    std::vector<std::uint64_t> failed_tx_ids;
    std::size_t processed_count = 0;
    std::int64_t final_virtual_time = 0;
};

/// Single-owner event loop running the full validation flow: assess each
/// transaction, divert rejects to the incident log, batch survivors into
/// blocks on a size-or-deadline trigger, run theta-of-N consensus, commit or
/// retry, and stamp per-transaction timings on the shared virtual clock.
class Pipeline {
public:
    Pipeline(PipelineConfig cfg, FeatureConfig fcfg, RiskEngine engine,
             NetworkModel network);

    /// Trains both models on a labeled prefix before live processing: the
    /// first epoch folds the prefix into the user profiles, further epochs
    /// replay the collected feature/label pairs. Empty prefix is a no-op.
    void warm_start(std::span<const Transaction> prefix);

    /// Processes the live stream end to end and returns every artifact.
    /// Per-transaction problems are recorded, never fatal.
    RunArtifacts run(std::span<const Transaction> live);

    const RiskEngine& engine() const { return engine_; }
    RiskEngine& engine() { return engine_; }
    const NetworkModel& network() const { return network_; }
    NetworkModel& network() { return network_; }

private:
    struct MempoolEntry {
        Transaction tx; ///< behavior populated
        double risk = 0.0;
        std::int64_t assessed_at = 0;
        std::size_t retries = 0;
    };

    UserProfile& profile_for(const std::string& account);
    void propose_round(RunArtifacts& artifacts);

    PipelineConfig cfg_;
    FeatureConfig fcfg_;
    RiskEngine engine_;
    NetworkModel network_;
    std::unordered_map<std::string, UserProfile> profiles_;
    SimClock clock_;
    std::deque<MempoolEntry> mempool_;
    std::optional<std::int64_t> mempool_deadline_;
    std::unordered_map<std::uint64_t, std::size_t> lifecycle_index_;
};

/// Convenience wrapper: warm-starts on the leading fraction of the stream
/// and runs the remainder. Warm-up transactions get no lifecycle records.
RunArtifacts process_stream(const LabeledStream& stream, const PipelineConfig& cfg,
                            const FeatureConfig& fcfg, RiskEngine engine,
                            NetworkModel network, double warm_fraction = 0.0,
                            RiskEngine* final_engine = nullptr);

} // namespace riskchain
