#include "bvs/regression.hpp"

#include <algorithm>
#include <cmath>

#include "bvs/errors.hpp"

namespace bvs {

namespace {

Eigen::MatrixXd augmented_design(const Dataset& ds, const ModelSubset& subset) {
    if (subset.max_index() > ds.k()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "subset index " + std::to_string(subset.max_index()) +
                        " exceeds regressor count " + std::to_string(ds.k()));
    }
    const long n = ds.n();
    const int j = subset.dimension();
    Eigen::MatrixXd a(n, j + 1);
    a.col(0).setOnes();
    int c = 1;
    for (int idx : subset.indices()) a.col(c++) = ds.x.col(idx - 1);
    return a;
}

void check_dof(long n, int j) {
    if (n < 3 || n <= j + 1) {
        throw Error(ErrorCode::insufficient_dof,
                    "need n > j + 1 and n >= 3 (n = " + std::to_string(n) +
                        ", j = " + std::to_string(j) + ")");
    }
}

// Residual sum of squares via column-pivoted Householder QR of the
// augmented design. Rejects the subset if any pivot falls under the
// relative rank threshold.
double qr_residual_sum(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    const long n = a.rows();
    const long m = a.cols();

    double max_col_norm = 0.0;
    for (long c = 0; c < m; ++c) max_col_norm = std::max(max_col_norm, a.col(c).norm());

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    const auto& r = qr.matrixR();
    const double pivot_floor = kRankTolerance * max_col_norm;
    for (long i = 0; i < m; ++i) {
        if (std::abs(r(i, i)) <= pivot_floor) {
            throw Error(ErrorCode::rank_deficient,
                        "augmented design is rank deficient (pivot " + std::to_string(i) + ")");
        }
    }

    Eigen::VectorXd qty = y;
    qty.applyOnTheLeft(qr.householderQ().transpose());
    return qty.tail(n - m).squaredNorm();
}

}  // namespace

double residual_sum(const Dataset& ds, const ModelSubset& subset) {
    check_dof(ds.n(), subset.dimension());
    const Eigen::MatrixXd a = augmented_design(ds, subset);
    return qr_residual_sum(a, ds.y);
}

FitSummary compute_bj0(const Dataset& ds, const ModelSubset& subset) {
    const double sse0 = residual_sum(ds, ModelSubset{});
    const double scale = std::max(1.0, ds.y.squaredNorm());
    if (sse0 <= scale * 1e-24) {
        throw Error(ErrorCode::constant_response, "response is constant (sse0 = 0)");
    }
    if (subset.empty()) {
        return FitSummary{sse0, sse0, 1.0};
    }
    const double sse = residual_sum(ds, subset);
    const double b = std::clamp(sse / sse0, kMinBj0, 1.0);
    return FitSummary{sse, sse0, b};
}

double pseudo_distance(const Dataset& ds, const TrueModel& true_model,
                       const ModelSubset& other) {
    if (true_model.sigma <= 0.0) throw_domain("sigma must be positive");
    if (true_model.beta.size() != true_model.subset.dimension() + 1) {
        throw Error(ErrorCode::dimension_mismatch,
                    "beta length must be true dimension + 1 (intercept first)");
    }
    if (true_model.subset == other) return 0.0;

    check_dof(ds.n(), other.dimension());
    const Eigen::MatrixXd a_true = augmented_design(ds, true_model.subset);
    const Eigen::VectorXd mean = a_true * true_model.beta;

    const Eigen::MatrixXd a_other = augmented_design(ds, other);
    const long m = a_other.cols();

    double max_col_norm = 0.0;
    for (long c = 0; c < m; ++c) max_col_norm = std::max(max_col_norm, a_other.col(c).norm());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_other);
    const auto& r = qr.matrixR();
    for (long i = 0; i < m; ++i) {
        if (std::abs(r(i, i)) <= kRankTolerance * max_col_norm) {
            throw Error(ErrorCode::rank_deficient, "comparison design is rank deficient");
        }
    }

    Eigen::VectorXd qtm = mean;
    qtm.applyOnTheLeft(qr.householderQ().transpose());
    const double resid = qtm.tail(ds.n() - m).squaredNorm();
    return resid / (2.0 * true_model.sigma * true_model.sigma * static_cast<double>(ds.n()));
}

double pseudo_distance_population(const Eigen::MatrixXd& covariate_cov,
                                  const ModelSubset& true_subset,
                                  const Eigen::VectorXd& beta,
                                  double sigma,
                                  const ModelSubset& other) {
    if (sigma <= 0.0) throw_domain("sigma must be positive");
    const long k = covariate_cov.rows();
    if (covariate_cov.cols() != k) throw_domain("covariance must be square");
    if (true_subset.max_index() > k || other.max_index() > k) {
        throw Error(ErrorCode::dimension_mismatch, "subset index exceeds covariance dimension");
    }
    const int t = true_subset.dimension();
    if (beta.size() != t) {
        throw Error(ErrorCode::dimension_mismatch,
                    "population beta excludes the intercept; expected length " + std::to_string(t));
    }
    if (t == 0) return 0.0;
    if (true_subset.is_subset_of(other)) return 0.0;

    Eigen::MatrixXd s_tt(t, t);
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b)
            s_tt(a, b) = covariate_cov(true_subset.indices()[a] - 1, true_subset.indices()[b] - 1);

    Eigen::MatrixXd schur = s_tt;
    const int j = other.dimension();
    if (j > 0) {
        Eigen::MatrixXd s_jj(j, j);
        Eigen::MatrixXd s_tj(t, j);
        for (int a = 0; a < j; ++a)
            for (int b = 0; b < j; ++b)
                s_jj(a, b) = covariate_cov(other.indices()[a] - 1, other.indices()[b] - 1);
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < j; ++b)
                s_tj(a, b) = covariate_cov(true_subset.indices()[a] - 1, other.indices()[b] - 1);
        Eigen::LLT<Eigen::MatrixXd> llt(s_jj);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorCode::rank_deficient, "comparison covariance block is not positive definite");
        }
        schur -= s_tj * llt.solve(s_tj.transpose());
    }
    const double form = beta.dot(schur * beta);
    return std::max(0.0, form) / (2.0 * sigma * sigma);
}

SubsetSseEngine::SubsetSseEngine(const Dataset& ds) : n_(ds.n()), k_(ds.k()) {
    if (k_ > 63) throw_domain("subset engine supports at most 63 regressors");
    check_dof(n_, 0);

    Eigen::MatrixXd a(n_, k_ + 1);
    a.col(0).setOnes();
    for (int c = 0; c < k_; ++c) a.col(c + 1) = ds.x.col(c);

    for (int c = 0; c <= k_; ++c) max_col_norm_ = std::max(max_col_norm_, a.col(c).norm());

    // One orthogonal pass over the n-sized data; everything per-subset is
    // derived from the triangular factor.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(k_ + 1).triangularView<Eigen::Upper>();
    gram_ = r.transpose() * r;
    xty_ = a.transpose() * ds.y;
    yty_ = ds.y.squaredNorm();
    sse0_ = std::max(0.0, yty_ - xty_(0) * xty_(0) / static_cast<double>(n_));
}

double SubsetSseEngine::sse(std::uint64_t mask) const {
    if (k_ < 64 && (mask >> k_) != 0) throw_domain("mask has bits beyond k");
    const int j = __builtin_popcountll(mask);
    check_dof(n_, j);
    if (mask == 0) return sse0_;

    // Gather the subset's Gram block (intercept always first).
    int cols[64];
    cols[0] = 0;
    int m = 1;
    for (int i = 0; i < k_; ++i) {
        if (mask & (std::uint64_t{1} << i)) cols[m++] = i + 1;
    }

    double l[64 * 64];
    double z[64];
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= r; ++c) l[r * m + c] = gram_(cols[r], cols[c]);
    for (int r = 0; r < m; ++r) z[r] = xty_(cols[r]);

    // In-place Cholesky with a rank threshold on the pivots (each pivot is
    // the squared residual norm of that column against the preceding ones).
    // Gram arithmetic floors the pivot noise near eps * ||col||^2, so the
    // per-column relative test rejects anything at that level on top of the
    // design-wide threshold used by the QR path.
    const double pivot_floor = kRankTolerance * max_col_norm_;
    for (int c = 0; c < m; ++c) {
        const double diag = l[c * m + c];
        double d = diag;
        for (int p = 0; p < c; ++p) d -= l[c * m + p] * l[c * m + p];
        if (!(d > std::max(pivot_floor * pivot_floor, 1e-13 * diag))) {
            throw Error(ErrorCode::rank_deficient,
                        "augmented design is rank deficient for mask " + std::to_string(mask));
        }
        const double root = std::sqrt(d);
        l[c * m + c] = root;
        for (int r = c + 1; r < m; ++r) {
            double v = l[r * m + c];
            for (int p = 0; p < c; ++p) v -= l[r * m + p] * l[c * m + p];
            l[r * m + c] = v / root;
        }
    }

    // Forward solve L z' = X'y; then sse = y'y - ||z'||^2.
    double proj = 0.0;
    for (int r = 0; r < m; ++r) {
        double v = z[r];
        for (int p = 0; p < r; ++p) v -= l[r * m + p] * z[p];
        v /= l[r * m + r];
        z[r] = v;
        proj += v * v;
    }
    return std::max(0.0, yty_ - proj);
}

FitSummary SubsetSseEngine::fit(std::uint64_t mask) const {
    const double scale = std::max(1.0, yty_);
    if (sse0_ <= scale * 1e-24) {
        throw Error(ErrorCode::constant_response, "response is constant (sse0 = 0)");
    }
    if (mask == 0) return FitSummary{sse0_, sse0_, 1.0};
    const double s = sse(mask);
    return FitSummary{s, sse0_, std::clamp(s / sse0_, kMinBj0, 1.0)};
}

}  // namespace bvs
