#include <doctest.h>

#include <cmath>
#include <vector>

#include "bvs/errors.hpp"
#include "bvs/math_utils.hpp"
#include "bvs/model_priors.hpp"

using namespace bvs;

namespace {

// Total prior mass over the 2^k model space, assembled per dimension class.
double total_mass(const ModelPrior& prior, int k) {
    std::vector<double> logs;
    for (int j = 0; j <= k; ++j) {
        logs.push_back(log_binomial(k, j) + log_prior(prior, j, k));
    }
    return std::exp(log_sum_exp(logs));
}

}  // namespace

TEST_CASE("bernoulli with theta = 1/2 coincides with the uniform prior") {
    const ModelPrior half = ModelPrior::bernoulli(0.5);
    const ModelPrior flat = ModelPrior::uniform();
    for (int k : {1, 4, 9}) {
        for (int j = 0; j <= k; ++j) {
            CHECK(log_prior(half, j, k) == doctest::Approx(log_prior(flat, j, k)).epsilon(1e-14));
        }
    }
}

TEST_CASE("hierarchical uniform values match direct arithmetic") {
    CHECK(log_prior(ModelPrior::hierarchical_uniform(), 0, 4) ==
          doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));
    // C(4,2) = 6, so pi = 1/(6*5)
    CHECK(log_prior(ModelPrior::hierarchical_uniform(), 2, 4) ==
          doctest::Approx(std::log(1.0 / 30.0)).epsilon(1e-12));
}

TEST_CASE("all priors normalize over the enumerated model space") {
    for (int k : {1, 4, 8, 12}) {
        CHECK(std::abs(total_mass(ModelPrior::bernoulli(0.5), k) - 1.0) < 1e-12);
        CHECK(std::abs(total_mass(ModelPrior::bernoulli(0.17), k) - 1.0) < 1e-12);
        CHECK(std::abs(total_mass(ModelPrior::hierarchical_uniform(), k) - 1.0) < 1e-12);
        CHECK(std::abs(total_mass(ModelPrior::uniform(), k) - 1.0) < 1e-12);
    }
}

TEST_CASE("prior ratios cancel as expected") {
    CHECK(log_prior_ratio(ModelPrior::hierarchical_uniform(), 3, 3, 10) == 0.0);
    CHECK(log_prior_ratio(ModelPrior::bernoulli(0.3), 5, 4, 12) ==
          doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-12));
    // HU: ratio = (j! (k-j)!) / (t! (k-t)!) at k=10, j=5, t=2
    const double expected = std::log((120.0 * 120.0) / (2.0 * 40320.0));
    CHECK(log_prior_ratio(ModelPrior::hierarchical_uniform(), 5, 2, 10) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(-1.7228).epsilon(1e-4));
}

TEST_CASE("bernoulli prior concentrates the covariate proportion like 1/k") {
    const double theta = 0.3;
    const ModelPrior prior = ModelPrior::bernoulli(theta);
    auto var_of_ratio = [&](int k) {
        // first and second moments of j/k under the induced binomial
        double mean = 0.0, second = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double p = std::exp(log_binomial(k, j) + log_prior(prior, j, k));
            const double x = static_cast<double>(j) / k;
            mean += p * x;
            second += p * x * x;
        }
        CHECK(mean == doctest::Approx(theta).epsilon(1e-10));
        return second - mean * mean;
    };
    const double v50 = var_of_ratio(50);
    const double v200 = var_of_ratio(200);
    const double v800 = var_of_ratio(800);
    CHECK(v50 == doctest::Approx(theta * (1 - theta) / 50).epsilon(1e-8));
    CHECK(v200 / v800 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(v50 / v200 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("prior parsing follows the CLI syntax") {
    CHECK(ModelPrior::parse("hu").kind() == ModelPrior::Kind::hierarchical_uniform);
    CHECK(ModelPrior::parse("uniform").kind() == ModelPrior::Kind::uniform);
    const ModelPrior b = ModelPrior::parse("bernoulli:0.25");
    CHECK(b.kind() == ModelPrior::Kind::bernoulli);
    CHECK(b.theta() == 0.25);
    CHECK(ModelPrior::parse("bernoulli:0.25").to_string() == "bernoulli:0.25");
    CHECK_THROWS_AS(ModelPrior::parse("bernoulli:1.0"), Error);
    CHECK_THROWS_AS(ModelPrior::parse("bernoulli:zero"), Error);
    CHECK_THROWS_AS(ModelPrior::parse("jeffreys"), Error);
}

TEST_CASE("degenerate inclusion probabilities and dimensions are rejected") {
    CHECK_THROWS_AS(ModelPrior::bernoulli(0.0), Error);
    CHECK_THROWS_AS(ModelPrior::bernoulli(1.0), Error);
    CHECK_THROWS_AS(log_prior(ModelPrior::uniform(), 3, 2), Error);
    CHECK_THROWS_AS(log_prior(ModelPrior::uniform(), -1, 2), Error);
}

TEST_CASE("log-gamma binomials stay finite far beyond factorial range") {
    const double v = log_prior(ModelPrior::hierarchical_uniform(), 150, 400);
    CHECK(std::isfinite(v));
    CHECK(v < 0.0);
    CHECK(std::abs(total_mass(ModelPrior::hierarchical_uniform(), 400) - 1.0) < 1e-10);
}
