#include "bvs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bvs/errors.hpp"

namespace bvs {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || cell.empty()) {
        throw Error(ErrorCode::non_finite_value,
                    "unparseable value '" + cell + "' at data row " + std::to_string(row) +
                        ", column '" + col + "'");
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::non_finite_value,
                    "non-finite value at data row " + std::to_string(row) + ", column '" + col + "'");
    }
    return value;
}

}  // namespace

Dataset parse_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::empty_dataset, "empty input: no header row");
    }
    std::vector<std::string> headers = split_csv_line(line);
    for (auto& h : headers) h = trim(h);

    long y_col = -1;
    std::vector<std::string> names;
    std::vector<long> regressor_cols;
    for (std::size_t c = 0; c < headers.size(); ++c) {
        if (headers[c] == "y") {
            if (y_col >= 0) throw Error(ErrorCode::duplicate_column, "duplicate column 'y'");
            y_col = static_cast<long>(c);
        } else {
            if (std::find(names.begin(), names.end(), headers[c]) != names.end()) {
                throw Error(ErrorCode::duplicate_column, "duplicate column '" + headers[c] + "'");
            }
            names.push_back(headers[c]);
            regressor_cols.push_back(static_cast<long>(c));
        }
    }
    if (y_col < 0) {
        throw Error(ErrorCode::missing_response_column, "no column named 'y'");
    }

    std::vector<std::vector<double>> rows;
    std::size_t row_number = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row_number;
        const auto fields = split_csv_line(line);
        if (fields.size() != headers.size()) {
            throw Error(ErrorCode::malformed_row,
                        "data row " + std::to_string(row_number) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(headers.size()));
        }
        std::vector<double> parsed(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            parsed[c] = parse_cell(fields[c], row_number, headers[c]);
        }
        rows.push_back(std::move(parsed));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::empty_dataset, "no data rows");
    }

    Dataset ds;
    const long n = static_cast<long>(rows.size());
    const int k = static_cast<int>(names.size());
    ds.y.resize(n);
    ds.x.resize(n, k);
    ds.names = std::move(names);
    for (long r = 0; r < n; ++r) {
        ds.y(r) = rows[r][y_col];
        for (int c = 0; c < k; ++c) ds.x(r, c) = rows[r][regressor_cols[c]];
    }

    for (int c = 0; c < k; ++c) {
        const double lo = ds.x.col(c).minCoeff();
        const double hi = ds.x.col(c).maxCoeff();
        if (lo == hi) {
            throw Error(ErrorCode::constant_regressor,
                        "regressor '" + ds.names[c] + "' is constant (collinear with the intercept)");
        }
    }
    return ds;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    }
    return parse_dataset_csv(in);
}

ModelSubset::ModelSubset(std::vector<int> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 1) {
            throw_domain("regressor indices are 1-based; got " + std::to_string(indices_[i]));
        }
        if (i > 0 && indices_[i] <= indices_[i - 1]) {
            throw_domain("subset indices must be strictly increasing");
        }
    }
}

ModelSubset ModelSubset::from_bitmask(std::uint64_t mask, int k) {
    if (k < 0 || k > 63) throw_domain("bitmask subsets support at most 63 regressors");
    if (k < 64 && (mask >> k) != 0) throw_domain("bitmask has bits beyond k");
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(__builtin_popcountll(mask)));
    for (int i = 0; i < k; ++i) {
        if (mask & (std::uint64_t{1} << i)) idx.push_back(i + 1);
    }
    ModelSubset s;
    s.indices_ = std::move(idx);
    return s;
}

std::uint64_t ModelSubset::to_bitmask() const {
    std::uint64_t mask = 0;
    for (int i : indices_) {
        if (i > 64) throw_domain("subset index beyond bitmask range");
        mask |= std::uint64_t{1} << (i - 1);
    }
    return mask;
}

bool ModelSubset::is_subset_of(const ModelSubset& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(),
                         indices_.begin(), indices_.end());
}

std::string ModelSubset::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(indices_[i]);
    }
    return out;
}

ModelSubset ModelSubset::parse(const std::string& text, int k) {
    std::vector<int> idx;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            throw_domain("bad subset index '" + token + "'");
        }
        idx.push_back(value);
    }
    std::sort(idx.begin(), idx.end());
    ModelSubset subset{idx};
    if (subset.max_index() > k) {
        throw_domain("subset index " + std::to_string(subset.max_index()) +
                     " exceeds regressor count " + std::to_string(k));
    }
    return subset;
}

}  // namespace bvs
