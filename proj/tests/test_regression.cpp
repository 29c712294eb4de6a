#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "bvs/dataset.hpp"
#include "bvs/errors.hpp"
#include "bvs/regression.hpp"

using namespace bvs;

namespace {

Dataset from_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset_csv(in);
}

Dataset random_dataset(long n, int k, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> normal;
    Dataset ds;
    ds.y.resize(n);
    ds.x.resize(n, k);
    for (int c = 0; c < k; ++c) ds.names.push_back("x" + std::to_string(c + 1));
    for (long r = 0; r < n; ++r) {
        for (int c = 0; c < k; ++c) ds.x(r, c) = normal(gen);
        ds.y(r) = normal(gen);
    }
    return ds;
}

// Independent oracle: residual sum via a dense normal-equations solve.
double normal_equations_sse(const Dataset& ds, const ModelSubset& subset) {
    const long n = ds.n();
    const int j = subset.dimension();
    Eigen::MatrixXd a(n, j + 1);
    a.col(0).setOnes();
    int c = 1;
    for (int idx : subset.indices()) a.col(c++) = ds.x.col(idx - 1);
    const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * ds.y);
    return (ds.y - a * beta).squaredNorm();
}

}  // namespace

TEST_CASE("csv loading accepts a minimal well-formed file") {
    const Dataset ds = from_csv("y,x1\n1.0,0.5\n2.0,1.5\n3.0,2.0\n");
    CHECK(ds.n() == 3);
    CHECK(ds.k() == 1);
    CHECK(ds.names == std::vector<std::string>{"x1"});
    CHECK(ds.y(2) == doctest::Approx(3.0));
}

TEST_CASE("csv loading preserves column order around y") {
    const Dataset ds = from_csv("a,y,b\n1,2,3\n4,5,6\n0,1,2\n");
    CHECK(ds.names == std::vector<std::string>{"a", "b"});
    CHECK(ds.x(0, 0) == 1.0);
    CHECK(ds.x(0, 1) == 3.0);
    CHECK(ds.y(0) == 2.0);
}

TEST_CASE("csv loading rejects bad inputs") {
    auto code_of = [](const std::string& text) {
        try {
            from_csv(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::io_error;
    };
    CHECK(code_of("a,b\n1,2\n") == ErrorCode::missing_response_column);
    CHECK(code_of("y,x1\n") == ErrorCode::empty_dataset);
    CHECK(code_of("") == ErrorCode::empty_dataset);
    CHECK(code_of("y,x1\n1,NaN\n2,3\n") == ErrorCode::non_finite_value);
    CHECK(code_of("y,x1\n1,inf\n2,3\n") == ErrorCode::non_finite_value);
    CHECK(code_of("y,x1\n1,oops\n") == ErrorCode::non_finite_value);
    CHECK(code_of("y,x1\n1\n") == ErrorCode::malformed_row);
    CHECK(code_of("y,x1,x1\n1,2,3\n") == ErrorCode::duplicate_column);
    CHECK(code_of("y,x1,x2\n1,1,5.0\n2,2,5.0\n3,4,5.0\n") == ErrorCode::constant_regressor);
}

TEST_CASE("model subsets validate and round-trip through bitmasks") {
    CHECK_THROWS_AS(ModelSubset({2, 2}), Error);
    CHECK_THROWS_AS(ModelSubset({0}), Error);
    const ModelSubset s({1, 3, 4});
    CHECK(s.to_bitmask() == 0b1101u);
    CHECK(ModelSubset::from_bitmask(0b1101u, 5) == s);
    CHECK(ModelSubset{}.is_subset_of(s));
    CHECK(s.is_subset_of(s));
    CHECK(ModelSubset({1, 3}).is_subset_of(s));
    CHECK_FALSE(ModelSubset({2}).is_subset_of(s));
}

TEST_CASE("intercept-only residual sum is the centered sum of squares") {
    const Dataset ds = from_csv("y,x1\n1,0.3\n2,0.7\n3,0.1\n");
    CHECK(residual_sum(ds, ModelSubset{}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a perfectly linear response fits with zero residual") {
    Dataset ds;
    ds.y.resize(6);
    ds.x.resize(6, 1);
    ds.names = {"x1"};
    for (long r = 0; r < 6; ++r) {
        ds.x(r, 0) = 0.5 * r - 1.0;
        ds.y(r) = 2.0 + 3.0 * ds.x(r, 0);
    }
    const double sse0 = residual_sum(ds, ModelSubset{});
    CHECK(residual_sum(ds, ModelSubset({1})) <= 1e-12 * sse0);
}

TEST_CASE("residual sums match the normal-equations oracle on seeded data") {
    std::mt19937 pick(7);
    for (unsigned seed = 1; seed <= 100; ++seed) {
        const Dataset ds = random_dataset(50, 5, seed);
        const std::uint64_t mask = pick() % 32;
        const ModelSubset subset = ModelSubset::from_bitmask(mask, 5);
        const double ours = residual_sum(ds, subset);
        const double oracle = normal_equations_sse(ds, subset);
        CHECK(ours == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("rank-deficient submodels are rejected, full-rank ones are not") {
    Dataset ds = random_dataset(20, 3, 11);
    ds.x.col(2) = 2.0 * ds.x.col(0);  // x3 = 2 x1
    CHECK_NOTHROW(residual_sum(ds, ModelSubset({1})));
    CHECK_NOTHROW(residual_sum(ds, ModelSubset({3})));
    CHECK_THROWS_AS(residual_sum(ds, ModelSubset({1, 3})), Error);
    try {
        residual_sum(ds, ModelSubset({1, 2, 3}));
        FAIL("expected rank_deficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::rank_deficient);
    }
}

TEST_CASE("insufficient degrees of freedom are rejected") {
    const Dataset ds = from_csv("y,x1,x2\n1,2,3\n2,4,1\n0,1,2\n");
    CHECK_THROWS_AS(residual_sum(ds, ModelSubset({1, 2})), Error);
}

TEST_CASE("b_j0 is one for the null model and decreases along nests") {
    const Dataset ds = random_dataset(40, 8, 3);
    CHECK(compute_bj0(ds, ModelSubset{}).b_j0 == 1.0);

    std::vector<double> b_by_mask(256);
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
        b_by_mask[mask] = compute_bj0(ds, ModelSubset::from_bitmask(mask, 8)).b_j0;
        CHECK(b_by_mask[mask] > 0.0);
        CHECK(b_by_mask[mask] <= 1.0);
    }
    for (std::uint64_t a = 0; a < 256; ++a) {
        for (std::uint64_t b = 0; b < 256; ++b) {
            if ((a & b) == a) {  // a nested in b
                CHECK(b_by_mask[b] <= b_by_mask[a] + 1e-12);
            }
        }
    }
}

TEST_CASE("the true subset beats every strict sub-subset on signal data") {
    std::mt19937 gen(19);
    std::normal_distribution<double> normal;
    Dataset ds = random_dataset(100, 6, 19);
    ds.y = ds.x.col(0) + ds.x.col(1) + ds.x.col(2);  // true regressors 1..3
    for (long r = 0; r < 100; ++r) ds.y(r) += normal(gen);

    const std::uint64_t true_mask = 0b111;
    const double b_true = compute_bj0(ds, ModelSubset::from_bitmask(true_mask, 6)).b_j0;
    for (std::uint64_t mask = 0; mask < true_mask; ++mask) {
        if ((mask & true_mask) == mask) {
            CHECK(b_true < compute_bj0(ds, ModelSubset::from_bitmask(mask, 6)).b_j0);
        }
    }
}

TEST_CASE("constant response is rejected") {
    const Dataset ds = from_csv("y,x1\n5,1\n5,2\n5,3\n");
    try {
        compute_bj0(ds, ModelSubset({1}));
        FAIL("expected constant_response");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::constant_response);
    }
}

TEST_CASE("pseudo-distance vanishes exactly on nests and is positive otherwise") {
    const Dataset ds = random_dataset(200, 5, 23);
    TrueModel truth;
    truth.subset = ModelSubset({1, 2});
    truth.beta = Eigen::Vector3d(0.5, 1.0, -2.0);
    truth.sigma = 1.0;

    CHECK(pseudo_distance(ds, truth, ModelSubset({1, 2})) == 0.0);
    CHECK(pseudo_distance(ds, truth, ModelSubset({1, 2, 4})) <= 1e-10);
    CHECK(pseudo_distance(ds, truth, ModelSubset({1, 2, 3, 4, 5})) <= 1e-10);
    CHECK(pseudo_distance(ds, truth, ModelSubset({1})) > 1e-3);
    CHECK(pseudo_distance(ds, truth, ModelSubset({3, 4})) > 1e-3);
    CHECK(pseudo_distance(ds, truth, ModelSubset{}) > 1e-3);
}

TEST_CASE("pseudo-distance on an explicit orthonormal design") {
    // x1 centered with x1'x1 = n: distance of (beta_0, beta_1) = (0, 1)
    // to the null model is x1'(I - 11'/n)x1 / (2n) = 1/2.
    Dataset ds;
    ds.y.resize(4);
    ds.x.resize(4, 1);
    ds.names = {"x1"};
    ds.x << 1, -1, 1, -1;
    ds.y << 0.1, 0.2, 0.3, 0.4;

    TrueModel truth;
    truth.subset = ModelSubset({1});
    truth.beta = Eigen::Vector2d(0.0, 1.0);
    truth.sigma = 1.0;
    CHECK(pseudo_distance(ds, truth, ModelSubset{}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("population pseudo-distance follows the conditional covariance") {
    // Equicorrelated covariates: rho = 0.5, unit variances, k = 3.
    Eigen::MatrixXd cov(3, 3);
    cov << 1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0;
    const ModelSubset truth({1});
    const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 2.0);

    // Against the null: beta' S_tt beta / 2 = 4/2.
    CHECK(pseudo_distance_population(cov, truth, beta, 1.0, ModelSubset{}) ==
          doctest::Approx(2.0));
    // Against {2}: conditional variance 1 - rho^2 = 0.75.
    CHECK(pseudo_distance_population(cov, truth, beta, 1.0, ModelSubset({2})) ==
          doctest::Approx(4.0 * 0.75 / 2.0));
    // Nesting gives zero.
    CHECK(pseudo_distance_population(cov, truth, beta, 1.0, ModelSubset({1, 3})) == 0.0);
}

TEST_CASE("subset engine matches the per-subset QR path") {
    const Dataset ds = random_dataset(60, 7, 31);
    const SubsetSseEngine engine(ds);
    for (std::uint64_t mask = 0; mask < 128; ++mask) {
        const double direct = residual_sum(ds, ModelSubset::from_bitmask(mask, 7));
        CHECK(engine.sse(mask) == doctest::Approx(direct).epsilon(1e-10));
    }
    CHECK(engine.fit(0).b_j0 == 1.0);
}

TEST_CASE("subset engine rejects rank-deficient masks") {
    Dataset ds = random_dataset(30, 3, 37);
    ds.x.col(2) = ds.x.col(0) - ds.x.col(1);
    const SubsetSseEngine engine(ds);
    CHECK_NOTHROW(engine.sse(0b011));
    CHECK_THROWS_AS(engine.sse(0b111), Error);
}
