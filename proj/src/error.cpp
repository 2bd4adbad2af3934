#include "dkn/error.hpp"

namespace dkn {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::DegenerateCovariance: return "DegenerateCovariance";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::RankDeficientX: return "RankDeficientX";
    case Errc::NonFinite: return "NonFinite";
    case Errc::OffsetTooSmall: return "OffsetTooSmall";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::InvalidOrdering: return "InvalidOrdering";
    case Errc::DegenerateConditional: return "DegenerateConditional";
    case Errc::EnvDimensionMismatch: return "EnvDimensionMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::FileUnreadable: return "FileUnreadable";
    case Errc::MalformedCsv: return "MalformedCsv";
    case Errc::ResponseMissing: return "ResponseMissing";
    case Errc::EmptyAfterCleaning: return "EmptyAfterCleaning";
    }
    return "Unknown";
}

} // namespace dkn
