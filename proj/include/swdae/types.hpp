#pragma once
//
// Common scalar/matrix aliases and the error type shared by all modules.
//

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace swdae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
    DimensionMismatch,
    NonFinite,
    NotRegular,
    IllConditionedBasis,
    AmbientMismatch,
    ParseError,
    OutOfHorizon,
    InvalidArgument,
    OperatorSingular,
    NotPSD,
    HeterogeneousDifferentialSubspaces,
    RankTooLow,
};

std::string_view to_string(ErrorKind kind);

// True for failures of the numerics (as opposed to malformed input).
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    // Message without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace swdae
