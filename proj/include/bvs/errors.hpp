#pragma once

#include <stdexcept>
#include <string>

namespace bvs {

enum class ErrorCode {
    empty_dataset,
    missing_response_column,
    duplicate_column,
    malformed_row,
    non_finite_value,
    constant_regressor,
    constant_response,
    rank_deficient,
    insufficient_dof,
    dimension_mismatch,
    domain_error,
    enumeration_cap_exceeded,
    quadrature_nonconvergence,
    series_nonconvergence,
    io_error,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Malformed or unusable input data (as opposed to a numerical failure).
inline bool is_data_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::empty_dataset:
        case ErrorCode::missing_response_column:
        case ErrorCode::duplicate_column:
        case ErrorCode::malformed_row:
        case ErrorCode::non_finite_value:
        case ErrorCode::constant_regressor:
        case ErrorCode::constant_response:
        case ErrorCode::rank_deficient:
        case ErrorCode::insufficient_dof:
        case ErrorCode::dimension_mismatch:
        case ErrorCode::io_error:
            return true;
        default:
            return false;
    }
}

inline bool is_numerical_error(ErrorCode c) {
    return c == ErrorCode::quadrature_nonconvergence ||
           c == ErrorCode::series_nonconvergence;
}

[[noreturn]] inline void throw_domain(const std::string& what) {
    throw Error(ErrorCode::domain_error, what);
}

}  // namespace bvs
