#pragma once

#include "riskchain/tx.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace riskchain {

/// Triangular membership function on the normalized [0,1] axis, a <= b <= c.
/// a == b makes a saturating left shoulder (mu = 1 for z <= b); b == c a
/// saturating right shoulder (mu = 1 for z >= b). mu(b) = 1 always.
struct MembershipFunction {
    double a = 0.0;
    double b = 0.5;
    double c = 1.0;

    double eval(double z) const;
};

struct FuzzyLabel {
    std::string name;
    MembershipFunction mf;
};

/// One linguistic input variable with its ordered labels (Low/Medium/High in
/// the default base). Labels must jointly cover [0,1].
struct FuzzyVariable {
    std::string name;
    std::vector<FuzzyLabel> labels;

    const MembershipFunction& mf(const std::string& label) const;
};

/// Conjunctive rule: IF var1 is label1 AND ... THEN risk is weight.
/// The consequent risk level is the adaptive weight itself (zero-order
/// Sugeno consequent).
struct FuzzyRule {
    std::map<std::string, std::string> antecedents;
    double weight = 0.5;
};

using FuzzyInputs = std::map<std::string, double>;

class FuzzyRuleBase {
public:
    FuzzyRuleBase() = default;
    FuzzyRuleBase(std::vector<FuzzyVariable> variables, std::vector<FuzzyRule> rules,
                  double learning_rate = 0.05);

    /// Product of the rule's antecedent membership degrees over the inputs.
    /// Throws DomainError when an antecedent variable is missing from inputs.
    double firing_strength(const FuzzyRule& rule, const FuzzyInputs& inputs) const;

    /// All K firing strengths in rule order.
    std::vector<double> firing_strengths(const FuzzyInputs& inputs) const;

    /// Normalized weighted aggregate sum_k(w_k b_k) / sum_k(b_k).
    /// Throws DomainError when every rule is silent (coverage violation).
    double score(const FuzzyInputs& inputs) const;

    /// Same aggregation from externally supplied strengths; exposes the
    /// scale-invariance of the normalized form.
    double score_from_strengths(std::span<const double> strengths) const;

    /// One gradient step of 1/2 (score - target)^2 on the rule weights:
    /// w_k <- clamp(w_k - lr * (score - target) * b_k / sum_j b_j, 0, 1).
    void adapt_weights(const FuzzyInputs& inputs, int target);

    const std::vector<FuzzyVariable>& variables() const { return variables_; }
    const std::vector<FuzzyRule>& rules() const { return rules_; }
    std::vector<FuzzyRule>& rules() { return rules_; }
    double learning_rate() const { return learning_rate_; }
    void set_learning_rate(double lr) { learning_rate_ = lr; }

    /// Structural checks: K >= 1, weights in [0,1], antecedents resolvable,
    /// at least one antecedent per rule. Throws ConfigError on violation.
    void validate() const;

private:
    std::vector<FuzzyVariable> variables_;
    std::vector<FuzzyRule> rules_;
    double learning_rate_ = 0.05;
};

/// Names of the default fuzzy inputs drawn from the feature vector.
inline constexpr const char* kFuzzyAmount = "amount";
inline constexpr const char* kFuzzyBehavior = "behavior";
inline constexpr const char* kFuzzyGeo = "geo";

/// Maps a feature vector onto the default fuzzy inputs: the normalized
/// amount, a composite behavior score (mean of the behavior-derived
/// components with device consistency inverted so larger means more
/// anomalous), and the geo-jump flag.
FuzzyInputs fuzzy_inputs_from_features(const FeatureVector& fv);

/// The shipped v1 rule base: three variables with Low/Medium/High triangular
/// labels at 50% overlap and saturating shoulders, nine conjunctive
/// (amount, behavior) rules plus three geo-jump modifier rules, weights
/// initialized by a monotone prior over the antecedent levels.
FuzzyRuleBase default_rule_base();

} // namespace riskchain
