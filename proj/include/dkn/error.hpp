#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dkn {

enum class Errc {
    NotPositiveDefinite,
    NonSymmetric,
    DegenerateCovariance,
    DimensionMismatch,
    TooFewRows,
    RankDeficientX,
    NonFinite,
    OffsetTooSmall,
    NonPositiveWeight,
    InvalidOrdering,
    DegenerateConditional,
    EnvDimensionMismatch,
    InvalidArgument,
    ConfigInvalid,
    FileUnreadable,
    MalformedCsv,
    ResponseMissing,
    EmptyAfterCleaning,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying a machine-readable error kind.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace dkn
