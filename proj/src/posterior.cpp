#include "bvs/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "bvs/errors.hpp"
#include "bvs/math_utils.hpp"
#include "bvs/parallel.hpp"
#include "bvs/regression.hpp"

namespace bvs {

namespace {

// Barycentric Chebyshev interpolant of log BF as a function of x = log b on
// [x_lo, 0]. Enumeration over large model spaces evaluates the same (n, j)
// factor at millions of b values; the quadrature-backed methods go through
// this table once it has been validated against direct evaluation at probe
// points. Invalid tables fall back to direct quadrature.
class BfTable {
public:
    bool build(Method method, long n, int j, double x_lo, const QuadratureSpec& quad) {
        for (int nodes = 65; nodes <= 513; nodes = 2 * nodes - 1) {
            fit(method, n, j, x_lo, quad, nodes);
            if (validate(method, n, j, quad)) return true;
        }
        return false;
    }

    double eval(double x) const {
        double num = 0.0;
        double den = 0.0;
        const std::size_t m = x_.size();
        for (std::size_t i = 0; i < m; ++i) {
            const double dx = x - x_[i];
            if (std::abs(dx) < 1e-300) return f_[i];
            double w = (i % 2 == 0) ? 1.0 : -1.0;
            if (i == 0 || i == m - 1) w *= 0.5;
            w /= dx;
            num += w * f_[i];
            den += w;
        }
        return num / den;
    }

    double x_lo() const { return x_lo_; }

private:
    void fit(Method method, long n, int j, double x_lo, const QuadratureSpec& quad, int nodes) {
        x_lo_ = x_lo;
        const double mid = 0.5 * x_lo;
        const double half = -0.5 * x_lo;
        x_.resize(nodes);
        f_.resize(nodes);
        for (int i = 0; i < nodes; ++i) {
            const double theta = kPi * i / (nodes - 1);
            x_[i] = mid + half * std::cos(theta);
        }
        x_.front() = 0.0;
        x_.back() = x_lo;
        parallel_for(static_cast<std::size_t>(nodes), [&](std::size_t i) {
            f_[i] = log_bf(method, n, j, std::exp(x_[i]), quad).log_value;
        });
    }

    bool validate(Method method, long n, int j, const QuadratureSpec& quad) const {
        static constexpr double kProbe[7] = {0.053, 0.189, 0.341, 0.497, 0.653, 0.811, 0.947};
        for (double p : kProbe) {
            const double x = x_lo_ * p;
            const double direct = log_bf(method, n, j, std::exp(x), quad).log_value;
            if (std::abs(eval(x) - direct) > 1e-9 * (1.0 + std::abs(direct))) return false;
        }
        return true;
    }

    static constexpr double kPi = 3.14159265358979323846;
    double x_lo_ = 0.0;
    std::vector<double> x_;
    std::vector<double> f_;
};

// Per-dimension evaluator: closed-form methods evaluate directly; the
// quadrature methods use validated tables when the enumeration is large
// enough to amortize the build.
class BfEvaluator {
public:
    BfEvaluator(Method method, long n, int k, double b_floor, std::uint64_t mask_count,
                const QuadratureSpec& quad)
        : method_(method), n_(n), quad_(quad) {
        const bool quadrature_backed = method == Method::mix || method == Method::ip;
        const double x_lo = std::log(b_floor);
        if (!quadrature_backed || mask_count < 4096 || b_floor < 1e-30 || x_lo > -1e-6) return;
        tables_.resize(k + 1);
        valid_.assign(k + 1, false);
        for (int j = 0; j <= k; ++j) {
            valid_[j] = tables_[j].build(method_, n_, j, x_lo, quad_);
        }
    }

    double eval(int j, double b) const {
        if (b >= 1.0) b = 1.0;
        if (j < static_cast<int>(valid_.size()) && valid_[j]) {
            const double x = std::log(b);
            if (x >= tables_[j].x_lo()) return tables_[j].eval(x);
        }
        return log_bf(method_, n_, j, b, quad_).log_value;
    }

private:
    Method method_;
    long n_;
    QuadratureSpec quad_;
    std::vector<BfTable> tables_;
    std::vector<bool> valid_;
};

}  // namespace

PosteriorTable enumerate_posterior(const Dataset& ds, Method method, const ModelPrior& prior,
                                   const QuadratureSpec& quad, int enumeration_cap) {
    const int k = ds.k();
    if (enumeration_cap < 0) throw_domain("enumeration cap must be >= 0");
    if (k > enumeration_cap) {
        throw Error(ErrorCode::enumeration_cap_exceeded,
                    "k = " + std::to_string(k) + " exceeds the enumeration cap " +
                        std::to_string(enumeration_cap));
    }

    const SubsetSseEngine engine(ds);
    const std::uint64_t count = std::uint64_t{1} << k;

    std::vector<double> log_prior_by_dim(k + 1);
    for (int j = 0; j <= k; ++j) log_prior_by_dim[j] = log_prior(prior, j, k);

    const double b_floor = engine.fit(count - 1).b_j0;
    const BfEvaluator evaluator(method, ds.n(), k, b_floor, count, quad);

    PosteriorTable table;
    table.method = method;
    table.prior = prior;
    table.n = ds.n();
    table.k = k;
    table.entries.resize(count);

    // Fixed chunk grid: per-chunk partial sums are combined in chunk order,
    // so the normalization is bit-identical for any worker count.
    const std::uint64_t chunk = 1 << 14;
    const std::uint64_t n_chunks = (count + chunk - 1) / chunk;
    std::vector<double> chunk_max(n_chunks, kNegInf);

    auto& entries = table.entries;
    parallel_for(n_chunks, [&](std::size_t c) {
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(count, lo + chunk);
        double local_max = kNegInf;
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            const FitSummary fit = engine.fit(mask);
            const int j = __builtin_popcountll(mask);
            const double lbf = mask == 0 ? 0.0 : evaluator.eval(j, fit.b_j0);
            const double lu = lbf + log_prior_by_dim[j];
            entries[mask] = PosteriorEntry{mask, lu, 0.0};
            local_max = std::max(local_max, lu);
        }
        chunk_max[c] = local_max;
    });

    double global_max = kNegInf;
    for (double v : chunk_max) global_max = std::max(global_max, v);

    std::vector<double> chunk_sum(n_chunks, 0.0);
    parallel_for(n_chunks, [&](std::size_t c) {
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(count, lo + chunk);
        double acc = 0.0;
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            acc += std::exp(entries[mask].log_unnormalized - global_max);
        }
        chunk_sum[c] = acc;
    });

    double total = 0.0;
    for (double v : chunk_sum) total += v;
    const double log_z = global_max + std::log(total);

    parallel_for(n_chunks, [&](std::size_t c) {
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(count, lo + chunk);
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            entries[mask].posterior = std::exp(entries[mask].log_unnormalized - log_z);
        }
    });

    return table;
}

namespace {

// Posterior descending; ties prefer fewer regressors, then the
// lexicographically smaller index sequence.
bool entry_before(const PosteriorTable& table, const PosteriorEntry& a, const PosteriorEntry& b) {
    if (a.log_unnormalized != b.log_unnormalized) return a.log_unnormalized > b.log_unnormalized;
    const int ja = __builtin_popcountll(a.mask);
    const int jb = __builtin_popcountll(b.mask);
    if (ja != jb) return ja < jb;
    const auto ia = ModelSubset::from_bitmask(a.mask, table.k).indices();
    const auto ib = ModelSubset::from_bitmask(b.mask, table.k).indices();
    return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

}  // namespace

std::vector<std::pair<ModelSubset, double>> top_models(const PosteriorTable& table, std::uint64_t m) {
    if (m < 1 || m > table.entries.size()) {
        throw_domain("m must lie in [1, 2^k]");
    }
    std::vector<std::uint64_t> order(table.entries.size());
    for (std::uint64_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + m, order.end(),
                      [&](std::uint64_t a, std::uint64_t b) {
                          return entry_before(table, table.entries[a], table.entries[b]);
                      });
    std::vector<std::pair<ModelSubset, double>> out;
    out.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const auto& e = table.entries[order[i]];
        out.emplace_back(table.subset_of(e), e.posterior);
    }
    return out;
}

std::vector<double> inclusion_probabilities(const PosteriorTable& table) {
    std::vector<double> incl(table.k, 0.0);
    for (const auto& e : table.entries) {
        std::uint64_t mask = e.mask;
        while (mask) {
            const int bit = __builtin_ctzll(mask);
            incl[bit] += e.posterior;
            mask &= mask - 1;
        }
    }
    for (double& v : incl) v = std::min(1.0, v);
    return incl;
}

nlohmann::ordered_json posterior_to_json(const PosteriorTable& table) {
    nlohmann::ordered_json out;
    out["method"] = to_string(table.method);
    out["prior"] = table.prior.to_string();
    out["n"] = table.n;
    out["k"] = table.k;
    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (const auto& e : table.entries) {
        nlohmann::ordered_json row;
        row["indices"] = table.subset_of(e).indices();
        row["log_unnormalized"] = e.log_unnormalized;
        row["posterior"] = e.posterior;
        models.push_back(std::move(row));
    }
    out["models"] = std::move(models);
    out["inclusion"] = inclusion_probabilities(table);
    return out;
}

}  // namespace bvs
