#include "riskchain/risk.hpp"

#include "riskchain/errors.hpp"

#include <json.hpp>

#include <cmath>

namespace riskchain {

using nlohmann::json;

LogisticClassifier::LogisticClassifier(std::size_t dim, double learning_rate,
                                       double positive_weight)
    : weights_(dim, 0.0), learning_rate_(learning_rate),
      positive_weight_(positive_weight) {}

double LogisticClassifier::score(const FeatureVector& fv) const {
    if (fv.size() != weights_.size()) {
        throw DomainError("classifier dimension mismatch: model " +
                          std::to_string(weights_.size()) + ", input " +
                          std::to_string(fv.size()));
    }
    double z = bias_;
    for (std::size_t i = 0; i < weights_.size(); ++i) z += weights_[i] * fv[i];
    return logistic(z);
}

void LogisticClassifier::train_one(const FeatureVector& fv, int label) {
    if (label != 0 && label != 1) {
        throw DomainError("training label must be 0 or 1, got " + std::to_string(label));
    }
    // d/dw of log-loss: (p - y) * x
    double g = score(fv) - static_cast<double>(label);
    if (label == 1) g *= positive_weight_;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        weights_[i] -= learning_rate_ * g * fv[i];
    }
    bias_ -= learning_rate_ * g;
}

void LogisticClassifier::train(std::span<const std::pair<FeatureVector, int>> batch) {
    for (const auto& [fv, label] : batch) train_one(fv, label);
}

void FusionConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ConfigError("lambda must lie in [0,1]");
    }
    if (!(0.0 <= eta1 && eta1 < eta2 && eta2 <= 1.0)) {
        throw ConfigError("thresholds must satisfy 0 <= eta1 < eta2 <= 1");
    }
}

const char* to_string(Decision d) {
    switch (d) {
    case Decision::Accept: return "accept";
    case Decision::Monitor: return "monitor";
    case Decision::Reject: return "reject";
    }
    return "?";
}

Decision decision_from_string(const std::string& s) {
    if (s == "accept") return Decision::Accept;
    if (s == "monitor") return Decision::Monitor;
    if (s == "reject") return Decision::Reject;
    throw SchemaError("unknown decision '" + s + "'");
}

double fuse(const FusionConfig& cfg, double r_ml, double r_f) {
    return cfg.lambda * r_ml + (1.0 - cfg.lambda) * r_f;
}

Decision decide(const FusionConfig& cfg, double r) {
    if (r < cfg.eta1) return Decision::Accept;
    if (r < cfg.eta2) return Decision::Monitor;
    return Decision::Reject;
}

RiskEngine::RiskEngine()
    : classifier_(kFeatureDim), rules_(default_rule_base()), fusion_() {}

RiskEngine::RiskEngine(LogisticClassifier classifier, FuzzyRuleBase rules,
                       FusionConfig fusion)
    : classifier_(std::move(classifier)), rules_(std::move(rules)), fusion_(fusion) {
    fusion_.validate();
}

RiskAssessment RiskEngine::assess_features(std::uint64_t tx_id,
                                           const FeatureVector& fv) const {
    RiskAssessment out;
    out.tx_id = tx_id;
    out.r_ml = scorer_ ? scorer_->score(fv) : classifier_.score(fv);

    FuzzyInputs inputs = fuzzy_inputs_from_features(fv);
    auto betas = rules_.firing_strengths(inputs);
    out.r_f = rules_.score_from_strengths(betas);
    out.trace.reserve(betas.size());
    for (std::size_t k = 0; k < betas.size(); ++k) {
        out.trace.push_back({betas[k], rules_.rules()[k].weight});
    }

    out.r = fuse(fusion_, out.r_ml, out.r_f);
    out.decision = decide(fusion_, out.r);
    return out;
}

RiskAssessment RiskEngine::assess(const Transaction& tx, const FeatureConfig& fcfg) const {
    return assess_features(tx.tx_id, featurize(tx, fcfg));
}

void RiskEngine::learn(const FeatureVector& fv, int label) {
    classifier_.train_one(fv, label);
    rules_.adapt_weights(fuzzy_inputs_from_features(fv), label);
}

namespace {

constexpr int kEngineSchemaVersion = 1;

json mf_to_json(const MembershipFunction& mf) { return json::array({mf.a, mf.b, mf.c}); }

MembershipFunction mf_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw SchemaError("membership function must be [a,b,c]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json rulebase_json(const FuzzyRuleBase& rb) {
    json vars = json::array();
    for (const auto& v : rb.variables()) {
        json labels = json::array();
        for (const auto& l : v.labels) {
            labels.push_back({{"name", l.name}, {"mf", mf_to_json(l.mf)}});
        }
        vars.push_back({{"name", v.name}, {"labels", labels}});
    }
    json rules = json::array();
    for (const auto& r : rb.rules()) {
        rules.push_back({{"if", r.antecedents}, {"weight", r.weight}});
    }
    return {{"schema_version", kEngineSchemaVersion},
            {"learning_rate", rb.learning_rate()},
            {"variables", vars},
            {"rules", rules}};
}

FuzzyRuleBase rulebase_from(const json& j) {
    if (j.value("schema_version", 0) != kEngineSchemaVersion) {
        throw SchemaError("unsupported rule base schema version");
    }
    std::vector<FuzzyVariable> vars;
    for (const auto& v : j.at("variables")) {
        FuzzyVariable var;
        var.name = v.at("name").get<std::string>();
        for (const auto& l : v.at("labels")) {
            var.labels.push_back(
                {l.at("name").get<std::string>(), mf_from_json(l.at("mf"))});
        }
        vars.push_back(std::move(var));
    }
    std::vector<FuzzyRule> rules;
    for (const auto& r : j.at("rules")) {
        FuzzyRule rule;
        rule.antecedents = r.at("if").get<std::map<std::string, std::string>>();
        rule.weight = r.at("weight").get<double>();
        rules.push_back(std::move(rule));
    }
    return FuzzyRuleBase(std::move(vars), std::move(rules),
                         j.value("learning_rate", 0.05));
}

} // namespace

std::string rulebase_to_json(const FuzzyRuleBase& rb) { return rulebase_json(rb).dump(2); }

FuzzyRuleBase rulebase_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("rule base parse error: ") + e.what());
    }
    return rulebase_from(j);
}

std::string engine_to_json(const RiskEngine& engine) {
    json j{{"schema_version", kEngineSchemaVersion},
           {"classifier",
            {{"weights", engine.classifier().weights()},
             {"bias", engine.classifier().bias()},
             {"learning_rate", engine.classifier().learning_rate()},
             {"positive_weight", engine.classifier().positive_weight()}}},
           {"rulebase", rulebase_json(engine.rules())},
           {"fusion",
            {{"lambda", engine.fusion().lambda},
             {"eta1", engine.fusion().eta1},
             {"eta2", engine.fusion().eta2}}}};
    return j.dump(2);
}

RiskEngine engine_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("engine state parse error: ") + e.what());
    }
    if (j.value("schema_version", 0) != kEngineSchemaVersion) {
        throw SchemaError("unsupported engine state schema version");
    }
    const json& cj = j.at("classifier");
    auto weights = cj.at("weights").get<std::vector<double>>();
    LogisticClassifier clf(weights.size(), cj.at("learning_rate").get<double>(),
                           cj.value("positive_weight", 1.0));
    clf.weights() = std::move(weights);
    clf.bias() = cj.at("bias").get<double>();

    FuzzyRuleBase rb = rulebase_from(j.at("rulebase"));

    const json& fj = j.at("fusion");
    FusionConfig fusion{fj.at("lambda").get<double>(), fj.at("eta1").get<double>(),
                        fj.at("eta2").get<double>()};
    return RiskEngine(std::move(clf), std::move(rb), fusion);
}

} // namespace riskchain
