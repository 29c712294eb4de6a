#pragma once

#include <string>

namespace bvs {

// Prior mass over the model space: independent Bernoulli inclusion with
// probability theta, the hierarchical uniform prior (uniform over model
// dimensions, then uniform within each dimension class), or flat uniform.
class ModelPrior {
public:
    enum class Kind { bernoulli, hierarchical_uniform, uniform };

    static ModelPrior bernoulli(double theta);
    static ModelPrior hierarchical_uniform() { return ModelPrior(Kind::hierarchical_uniform, 0.0); }
    static ModelPrior uniform() { return ModelPrior(Kind::uniform, 0.0); }

    // "bernoulli:0.5" | "hu" | "uniform"
    static ModelPrior parse(const std::string& text);

    Kind kind() const { return kind_; }
    double theta() const { return theta_; }
    std::string to_string() const;

private:
    ModelPrior(Kind kind, double theta) : kind_(kind), theta_(theta) {}
    Kind kind_;
    double theta_;
};

// Log prior mass of any single model with j of k regressors. All models of
// equal dimension carry equal mass.
double log_prior(const ModelPrior& prior, int j, int k);

// log pi(M_j) - log pi(M_t) for dimensions j and t within k regressors.
double log_prior_ratio(const ModelPrior& prior, int j, int t, int k);

}  // namespace bvs
