#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bvs/bayes_factors.hpp"
#include "bvs/dataset.hpp"
#include "bvs/model_priors.hpp"
#include "bvs/quadrature.hpp"

namespace bvs {

inline constexpr int kDefaultEnumerationCap = 25;

struct PosteriorEntry {
    std::uint64_t mask;  // bit i set <=> regressor i+1 included
    double log_unnormalized;
    double posterior;
};

// Normalized posterior probabilities over all 2^k candidate models,
// bitmask ascending. Probabilities sum to one.
struct PosteriorTable {
    std::vector<PosteriorEntry> entries;
    Method method = Method::gn;
    ModelPrior prior = ModelPrior::uniform();
    long n = 0;
    int k = 0;

    ModelSubset subset_of(const PosteriorEntry& e) const {
        return ModelSubset::from_bitmask(e.mask, k);
    }
};

// Exact enumeration of the model space: every subset's Bayes factor against
// the null model plus its model-prior mass, normalized by log-sum-exp.
// Deterministic: output is identical for any worker count.
PosteriorTable enumerate_posterior(const Dataset& ds, Method method, const ModelPrior& prior,
                                   const QuadratureSpec& quad = {},
                                   int enumeration_cap = kDefaultEnumerationCap);

// Top m models by posterior; ties broken by fewer regressors, then by
// lexicographic index order.
std::vector<std::pair<ModelSubset, double>> top_models(const PosteriorTable& table, std::uint64_t m);

// Component i: total posterior mass of models containing regressor i+1.
std::vector<double> inclusion_probabilities(const PosteriorTable& table);

// {method, prior, n, k, models: [{indices, log_unnormalized, posterior}],
//  inclusion: [...]}, keys in this order.
nlohmann::ordered_json posterior_to_json(const PosteriorTable& table);

}  // namespace bvs
