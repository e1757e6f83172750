#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sponge {

enum class ErrorCode {
    MalformedInput,
    RatioOutOfRange,
    ImageEscapes,
    DuplicateDigit,
    EmptyDigitSet,
    LengthMismatch,
    NegativeWeight,
    SumNotOne,
    InvalidWeights,
    EmptyWord,
    EmptyList,
    InvalidPermutation,
    InvalidArgument,
    FileNotFound,
    UnsupportedDimension,
    NotLalleyGatzouras,
    NotSierpinskiCarpet,
    NonPositiveWeights,
    EnumerationCapExceeded,
    NoInteriorWord,
    HypothesesViolated,
    EmptySubsystem,
    InsufficientPoints,
    ReducibleCoordinate,
    PrefixTooShort,
    NotReducible,
};

std::string_view error_name(ErrorCode code);

/// True for errors caused by bad input (files, documents, arguments), false
/// for failures of a computation on valid input.
bool is_input_error(ErrorCode code);

class SpongeError : public std::runtime_error {
public:
    SpongeError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sponge
