#include <sponge/error.hpp>

namespace sponge {

std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
        case ErrorCode::ImageEscapes: return "ImageEscapes";
        case ErrorCode::DuplicateDigit: return "DuplicateDigit";
        case ErrorCode::EmptyDigitSet: return "EmptyDigitSet";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::SumNotOne: return "SumNotOne";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::EmptyWord: return "EmptyWord";
        case ErrorCode::EmptyList: return "EmptyList";
        case ErrorCode::InvalidPermutation: return "InvalidPermutation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::NotLalleyGatzouras: return "NotLalleyGatzouras";
        case ErrorCode::NotSierpinskiCarpet: return "NotSierpinskiCarpet";
        case ErrorCode::NonPositiveWeights: return "NonPositiveWeights";
        case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
        case ErrorCode::NoInteriorWord: return "NoInteriorWord";
        case ErrorCode::HypothesesViolated: return "HypothesesViolated";
        case ErrorCode::EmptySubsystem: return "EmptySubsystem";
        case ErrorCode::InsufficientPoints: return "InsufficientPoints";
        case ErrorCode::ReducibleCoordinate: return "ReducibleCoordinate";
        case ErrorCode::PrefixTooShort: return "PrefixTooShort";
        case ErrorCode::NotReducible: return "NotReducible";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedInput:
        case ErrorCode::RatioOutOfRange:
        case ErrorCode::ImageEscapes:
        case ErrorCode::DuplicateDigit:
        case ErrorCode::EmptyDigitSet:
        case ErrorCode::LengthMismatch:
        case ErrorCode::NegativeWeight:
        case ErrorCode::SumNotOne:
        case ErrorCode::InvalidWeights:
        case ErrorCode::EmptyWord:
        case ErrorCode::EmptyList:
        case ErrorCode::InvalidPermutation:
        case ErrorCode::InvalidArgument:
        case ErrorCode::FileNotFound:
        case ErrorCode::UnsupportedDimension:
            return true;
        default:
            return false;
    }
}

}  // namespace sponge
