#include "swdae/types.hpp"

namespace swdae {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::OutOfHorizon: return "OutOfHorizon";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OperatorSingular: return "OperatorSingular";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::HeterogeneousDifferentialSubspaces: return "HeterogeneousDifferentialSubspaces";
    case ErrorKind::RankTooLow: return "RankTooLow";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::IllConditionedBasis:
    case ErrorKind::OperatorSingular:
    case ErrorKind::NotPSD:
    case ErrorKind::HeterogeneousDifferentialSubspaces:
    case ErrorKind::RankTooLow:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message)
{
}

void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

}  // namespace swdae
