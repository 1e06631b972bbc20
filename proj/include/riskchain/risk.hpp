#pragma once

#include "riskchain/fuzzy.hpp"
#include "riskchain/tx.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace riskchain {

/// Scoring interface the statistical model plugs in behind.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual double score(const FeatureVector& fv) const = 0;
};

/// Online logistic model: score = logistic(w . fv + b), trained by SGD on
/// log-loss. The default statistical scorer. positive_weight rescales the
/// gradient of label-1 examples to counter extreme class imbalance.
class LogisticClassifier final : public Scorer {
public:
    LogisticClassifier(std::size_t dim = kFeatureDim, double learning_rate = 0.1,
                       double positive_weight = 1.0);

    double score(const FeatureVector& fv) const override;

    /// One SGD pass over the batch in order; empty batch is a no-op.
    void train(std::span<const std::pair<FeatureVector, int>> batch);
    void train_one(const FeatureVector& fv, int label);

    const std::vector<double>& weights() const { return weights_; }
    std::vector<double>& weights() { return weights_; }
    double bias() const { return bias_; }
    double& bias() { return bias_; }
    double learning_rate() const { return learning_rate_; }
    void set_learning_rate(double lr) { learning_rate_ = lr; }
    double positive_weight() const { return positive_weight_; }
    void set_positive_weight(double w) { positive_weight_ = w; }

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    double learning_rate_;
    double positive_weight_;
};

/// Score fusion and decision thresholds: 0 <= eta1 < eta2 <= 1.
struct FusionConfig {
    double lambda = 0.6;
    double eta1 = 0.3;
    double eta2 = 0.7;

    void validate() const;
};

enum class Decision { Accept, Monitor, Reject };

const char* to_string(Decision d);
Decision decision_from_string(const std::string& s);

/// R = lambda * r_ml + (1 - lambda) * r_f.
double fuse(const FusionConfig& cfg, double r_ml, double r_f);

/// Accept iff R < eta1, Monitor iff eta1 <= R < eta2, Reject iff R >= eta2.
Decision decide(const FusionConfig& cfg, double r);

struct RuleTrace {
    double firing_strength = 0.0;
    double weight = 0.0;
};

struct RiskAssessment {
    std::uint64_t tx_id = 0;
    double r_ml = 0.0;
    double r_f = 0.0;
    double r = 0.0;
    Decision decision = Decision::Accept;
    std::vector<RuleTrace> trace; ///< per rule, in rule-base order
};

/// Statistical + fuzzy scoring engine. Scoring over frozen state is pure;
/// learn() mutates and is serialized by the caller.
class RiskEngine {
public:
    RiskEngine();
    RiskEngine(LogisticClassifier classifier, FuzzyRuleBase rules, FusionConfig fusion);

    /// featurize -> score_ml -> fuzzy_score -> fuse -> decide, with the
    /// per-rule explainability trace. Requires tx.behavior populated.
    RiskAssessment assess(const Transaction& tx, const FeatureConfig& fcfg) const;

    /// Same pipeline from an already-computed feature vector.
    RiskAssessment assess_features(std::uint64_t tx_id, const FeatureVector& fv) const;

    /// One online update of both models toward the label.
    void learn(const FeatureVector& fv, int label);

    /// Swap in a non-default scorer (tests, alternative models). Training
    /// keeps applying to the internal logistic model.
    void set_scorer(std::shared_ptr<const Scorer> scorer) { scorer_ = std::move(scorer); }

    const LogisticClassifier& classifier() const { return classifier_; }
    LogisticClassifier& classifier() { return classifier_; }
    const FuzzyRuleBase& rules() const { return rules_; }
    FuzzyRuleBase& rules() { return rules_; }
    const FusionConfig& fusion() const { return fusion_; }
    FusionConfig& fusion() { return fusion_; }

private:
    LogisticClassifier classifier_;
    FuzzyRuleBase rules_;
    FusionConfig fusion_;
    std::shared_ptr<const Scorer> scorer_; ///< null = use classifier_
};

/// Engine state (de)serialization, versioned schema.
std::string engine_to_json(const RiskEngine& engine);
RiskEngine engine_from_json(const std::string& text);

/// Rule base (de)serialization for the shipped config file.
std::string rulebase_to_json(const FuzzyRuleBase& rb);
FuzzyRuleBase rulebase_from_json(const std::string& text);

} // namespace riskchain
