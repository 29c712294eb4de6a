#include "bvs/model_priors.hpp"

#include <cmath>

#include "bvs/errors.hpp"
#include "bvs/math_utils.hpp"

namespace bvs {

ModelPrior ModelPrior::bernoulli(double theta) {
    if (!(theta > 0.0) || !(theta < 1.0)) {
        throw_domain("bernoulli inclusion probability must lie strictly in (0, 1)");
    }
    return ModelPrior(Kind::bernoulli, theta);
}

ModelPrior ModelPrior::parse(const std::string& text) {
    if (text == "hu") return hierarchical_uniform();
    if (text == "uniform") return uniform();
    const std::string prefix = "bernoulli:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string arg = text.substr(prefix.size());
        try {
            std::size_t used = 0;
            const double theta = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
            return bernoulli(theta);
        } catch (const std::logic_error&) {
            throw_domain("bad bernoulli parameter '" + arg + "'");
        }
    }
    throw_domain("unknown prior '" + text + "' (expected bernoulli:<theta>|hu|uniform)");
}

std::string ModelPrior::to_string() const {
    switch (kind_) {
        case Kind::bernoulli: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "bernoulli:%.17g", theta_);
            return buf;
        }
        case Kind::hierarchical_uniform: return "hu";
        case Kind::uniform: return "uniform";
    }
    return "?";
}

double log_prior(const ModelPrior& prior, int j, int k) {
    if (k < 0 || j < 0 || j > k) {
        throw_domain("need 0 <= j <= k (j = " + std::to_string(j) + ", k = " + std::to_string(k) + ")");
    }
    switch (prior.kind()) {
        case ModelPrior::Kind::bernoulli:
            return j * std::log(prior.theta()) + (k - j) * std::log1p(-prior.theta());
        case ModelPrior::Kind::hierarchical_uniform:
            return -log_binomial(k, j) - std::log(static_cast<double>(k) + 1.0);
        case ModelPrior::Kind::uniform:
            return -k * std::log(2.0);
    }
    throw_domain("unknown prior kind");
}

double log_prior_ratio(const ModelPrior& prior, int j, int t, int k) {
    return log_prior(prior, j, k) - log_prior(prior, t, k);
}

}  // namespace bvs
