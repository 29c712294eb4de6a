#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace bvs {

// Regression data: response y and k regressor columns. The intercept is
// implicit and never stored as a column.
struct Dataset {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;               // n x k, column order as in the source file
    std::vector<std::string> names;  // k regressor labels

    long n() const { return y.size(); }
    int k() const { return static_cast<int>(x.cols()); }
};

// CSV: UTF-8, comma separated, header row, one column named "y", remaining
// headers become regressor names. Decimal point only. Constant regressor
// columns are rejected (collinear with the implicit intercept).
Dataset load_dataset(const std::string& path);
Dataset parse_dataset_csv(std::istream& in);

// A set of regressor indices (1-based, strictly increasing) identifying one
// candidate model. The empty subset is the intercept-only null model.
class ModelSubset {
public:
    ModelSubset() = default;
    explicit ModelSubset(std::vector<int> indices);

    // Bit i of mask set <=> regressor i+1 included.
    static ModelSubset from_bitmask(std::uint64_t mask, int k);
    std::uint64_t to_bitmask() const;

    const std::vector<int>& indices() const { return indices_; }
    int dimension() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    int max_index() const { return indices_.empty() ? 0 : indices_.back(); }

    bool is_subset_of(const ModelSubset& other) const;
    bool operator==(const ModelSubset& other) const { return indices_ == other.indices_; }

    std::string to_string() const;  // "1,3,4"; "" for the null model
    static ModelSubset parse(const std::string& text, int k);

private:
    std::vector<int> indices_;
};

}  // namespace bvs
