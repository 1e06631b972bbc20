#include "riskchain/fuzzy.hpp"

#include "riskchain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskchain {

double MembershipFunction::eval(double z) const {
    if (a == b && z <= b) return 1.0;
    if (b == c && z >= b) return 1.0;
    if (z <= a || z >= c) return (z == b) ? 1.0 : 0.0;
    if (z <= b) return (z - a) / (b - a);
    return (c - z) / (c - b);
}

const MembershipFunction& FuzzyVariable::mf(const std::string& label) const {
    for (const auto& l : labels) {
        if (l.name == label) return l.mf;
    }
    throw DomainError("fuzzy variable '" + name + "' has no label '" + label + "'");
}

FuzzyRuleBase::FuzzyRuleBase(std::vector<FuzzyVariable> variables,
                             std::vector<FuzzyRule> rules, double learning_rate)
    : variables_(std::move(variables)), rules_(std::move(rules)),
      learning_rate_(learning_rate) {
    validate();
}

void FuzzyRuleBase::validate() const {
    if (rules_.empty()) throw ConfigError("rule base must contain at least one rule");
    for (std::size_t k = 0; k < rules_.size(); ++k) {
        const FuzzyRule& rule = rules_[k];
        if (rule.antecedents.empty()) {
            throw ConfigError("rule " + std::to_string(k) + " has no antecedents");
        }
        if (!(rule.weight >= 0.0 && rule.weight <= 1.0)) {
            throw ConfigError("rule " + std::to_string(k) + " weight outside [0,1]");
        }
        for (const auto& [var, label] : rule.antecedents) {
            auto it = std::find_if(variables_.begin(), variables_.end(),
                                   [&](const FuzzyVariable& v) { return v.name == var; });
            if (it == variables_.end()) {
                throw ConfigError("rule " + std::to_string(k) +
                                  " references unknown variable '" + var + "'");
            }
            it->mf(label); // throws on unknown label
        }
    }
}

double FuzzyRuleBase::firing_strength(const FuzzyRule& rule,
                                      const FuzzyInputs& inputs) const {
    double beta = 1.0;
    for (const auto& [var, label] : rule.antecedents) {
        auto in = inputs.find(var);
        if (in == inputs.end()) {
            throw DomainError("fuzzy input missing variable '" + var + "'");
        }
        auto vit = std::find_if(variables_.begin(), variables_.end(),
                                [&](const FuzzyVariable& v) { return v.name == var; });
        if (vit == variables_.end()) {
            throw DomainError("rule references unknown variable '" + var + "'");
        }
        beta *= vit->mf(label).eval(in->second);
    }
    return beta;
}

std::vector<double> FuzzyRuleBase::firing_strengths(const FuzzyInputs& inputs) const {
    std::vector<double> betas;
    betas.reserve(rules_.size());
    for (const auto& rule : rules_) betas.push_back(firing_strength(rule, inputs));
    return betas;
}

double FuzzyRuleBase::score_from_strengths(std::span<const double> strengths) const {
    if (strengths.size() != rules_.size()) {
        throw DomainError("strength count does not match rule count");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < rules_.size(); ++k) {
        num += rules_[k].weight * strengths[k];
        den += strengths[k];
    }
    if (den <= 0.0) {
        throw DomainError("fuzzy coverage violation: no rule fires for the input");
    }
    return num / den;
}

double FuzzyRuleBase::score(const FuzzyInputs& inputs) const {
    auto betas = firing_strengths(inputs);
    return score_from_strengths(betas);
}

void FuzzyRuleBase::adapt_weights(const FuzzyInputs& inputs, int target) {
    auto betas = firing_strengths(inputs);
    double den = std::accumulate(betas.begin(), betas.end(), 0.0);
    if (den <= 0.0) {
        throw DomainError("fuzzy coverage violation: no rule fires for the input");
    }
    double score = 0.0;
    for (std::size_t k = 0; k < rules_.size(); ++k) {
        score += rules_[k].weight * betas[k];
    }
    score /= den;
    double err = score - static_cast<double>(target);
    for (std::size_t k = 0; k < rules_.size(); ++k) {
        double w = rules_[k].weight - learning_rate_ * err * betas[k] / den;
        rules_[k].weight = std::clamp(w, 0.0, 1.0);
    }
}

FuzzyInputs fuzzy_inputs_from_features(const FeatureVector& fv) {
    if (fv.size() != kFeatureDim) {
        throw DomainError("expected " + std::to_string(kFeatureDim) +
                          "-dimensional feature vector, got " + std::to_string(fv.size()));
    }
    double behavior = (fv[2] + fv[3] + (1.0 - fv[4]) + fv[6]) / 4.0;
    return {{kFuzzyAmount, fv[0]}, {kFuzzyBehavior, behavior}, {kFuzzyGeo, fv[5]}};
}

namespace {

FuzzyVariable three_label_variable(std::string name) {
    return FuzzyVariable{std::move(name),
                         {{"Low", {0.0, 0.0, 0.5}},
                          {"Medium", {0.0, 0.5, 1.0}},
                          {"High", {0.5, 1.0, 1.0}}}};
}

double ordinal(const std::string& label) {
    if (label == "Low") return 0.0;
    if (label == "Medium") return 0.5;
    return 1.0;
}

} // namespace

FuzzyRuleBase default_rule_base() {
    std::vector<FuzzyVariable> vars{three_label_variable(kFuzzyAmount),
                                    three_label_variable(kFuzzyBehavior),
                                    three_label_variable(kFuzzyGeo)};

    std::vector<FuzzyRule> rules;
    const char* levels[] = {"Low", "Medium", "High"};
    for (const char* al : levels) {
        for (const char* bl : levels) {
            FuzzyRule rule;
            rule.antecedents = {{kFuzzyAmount, al}, {kFuzzyBehavior, bl}};
            rule.weight = 0.05 + 0.9 * (ordinal(al) + ordinal(bl)) / 2.0;
            rules.push_back(std::move(rule));
        }
    }
    // Geo modifier rules only engage when the jump flag is raised; the
    // conjunctive grid above already covers every input on its own.
    rules.push_back({{{kFuzzyGeo, "High"}}, 0.9});
    rules.push_back({{{kFuzzyGeo, "High"}, {kFuzzyBehavior, "High"}}, 0.95});
    rules.push_back({{{kFuzzyGeo, "High"}, {kFuzzyAmount, "Low"}}, 0.8});

    return FuzzyRuleBase(std::move(vars), std::move(rules), 0.05);
}

} // namespace riskchain
